#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "swe/banded_lu.hpp"
#include "swe/model.hpp"

namespace swe {

/// Shifted operator (dt L + alpha I) for L = L_g or L = L_g + L_c.
struct ShiftedSolveSpec
{
	TermGroup group = TermGroup::LG;
	double dt = 0;
	Complex alpha = 1;

	void validate() const;
};

/**
 * Direct solvers for (dt L + alpha) x = b in spectral space.
 *
 * L_g is diagonal per (l, m): zeta decouples and (Phi', delta) form 2x2 blocks.
 * L_g + L_c couples degrees l-1, l, l+1 at fixed m; the unknowns
 * (Phi'_l, zeta_l, delta_l) are interleaved so each m gives a band matrix with
 * four sub- and super-diagonals, solved by banded LU with partial pivoting.
 *
 * Band factorizations are cached per (dt, alpha) up to a byte budget. Lookups
 * and insertions are synchronized, so solves may run concurrently; warming the
 * cache with prepare() before a parallel phase avoids duplicate factoring.
 *
 * Real alpha with a real-origin right-hand side gives a real-origin solution;
 * anything else is solved on complex-origin data.
 */
class ShiftedSolver
{
public:
	explicit ShiftedSolver(const SweModel &model, std::size_t cache_budget_bytes = std::size_t(1) << 30);

	const SweModel &model() const { return model_; }

	PrognosticState solve(const ShiftedSolveSpec &spec, const PrognosticState &b) const;
	PrognosticState solve_lg(double dt, Complex alpha, const PrognosticState &b) const;
	PrognosticState solve_l(double dt, Complex alpha, const PrognosticState &b) const;

	/**
	 * Solves on the storage of x as given. For real-origin storage only the
	 * m >= 0 blocks are solved, also for complex alpha; the result then holds
	 * the m >= 0 coefficients of the complex-origin solution.
	 */
	void solve_in_place(const ShiftedSolveSpec &spec, PrognosticState &x) const;

	/// (dt L + alpha) x through the model's tendency path.
	PrognosticState apply(const ShiftedSolveSpec &spec, const PrognosticState &x) const;

	/// Factors and caches the L_g + L_c band matrices for all given shifts;
	/// negative_m = false covers solves on real-origin storage only.
	void prepare(double dt, std::span<const Complex> alphas, bool negative_m = true) const;

	void clear_cache() const;
	std::size_t cache_entries() const;
	std::size_t cache_bytes() const;

	/// Pivot-ratio threshold above which a shift is reported as singular.
	static constexpr double singular_threshold = 1e13;

private:
	struct Factorization
	{
		std::vector<BandedLU> per_m;	// index m + T
		std::size_t bytes = 0;
		bool negative_m = false;
	};

	void solve_lg_impl(double dt, Complex alpha, PrognosticState &x) const;
	void solve_l_impl(double dt, Complex alpha, PrognosticState &x) const;
	std::shared_ptr<const Factorization> factorization(double dt, Complex alpha, bool negative_m) const;
	std::shared_ptr<const Factorization> build(double dt, Complex alpha, bool negative_m) const;

	const SweModel &model_;
	double phi_scale_;		// Phi' = phi_scale * y keeps the band matrix well scaled
	std::size_t budget_;

	mutable std::shared_mutex mutex_;
	mutable std::map<std::pair<double, std::pair<double, double>>, std::shared_ptr<const Factorization>> cache_;
	mutable std::size_t cached_bytes_ = 0;
};

/// Stacked complex-origin coefficients (phi_pert, vort, div) of a state.
Eigen::VectorXcd stack_state(const PrognosticState &u);
PrognosticState unstack_state(const Eigen::VectorXcd &v, int trunc);

/// dt L as a dense matrix over stacked complex-origin coefficients, built by
/// applying the tendency path to unit vectors. Refuses truncations above 15.
Eigen::MatrixXcd dense_operator_matrix(const SweModel &model, TermGroup group, double dt);

}	// namespace swe
