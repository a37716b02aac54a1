#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "swe/linear_solvers.hpp"
#include "swe/rexi_coefficients.hpp"

namespace swe {

/// Balanced contiguous partition of the term indices 0..N-1 over K workers.
struct WorkPlan
{
	int num_terms = 0;
	int num_workers = 0;
	std::vector<std::vector<int>> assignments;

	void validate() const;
};

WorkPlan distribute_terms(int num_terms, int num_workers);


/// Wallclock seconds per category of a time step (or a sum over steps).
struct TimingBreakdown
{
	double overall = 0;
	double nonlinearities = 0;
	double rexi_total = 0;
	double broadcast = 0;
	double term_solves = 0;
	double reduce = 0;

	/// broadcast + term_solves + reduce <= rexi_total (1 + eps), rexi_total <= overall, all >= 0.
	bool closure_holds(double eps = 0.05) const;

	TimingBreakdown &operator+=(const TimingBreakdown &o);
};

nlohmann::json to_json(const TimingBreakdown &t, int num_workers, int num_terms, int ensemble);

/// Elementwise minimum, used to report the best of several ensemble runs.
TimingBreakdown min_timings(std::span<const TimingBreakdown> runs);


enum class ReduceMode
{
	FixedTree,		///< pairwise tree over term indices, bitwise independent of K
	Unordered,		///< per-worker partial sums added in completion order
};


/// One right-hand side of a combined REXI sum: sum_n betas[n] (dt L + alpha_n)^{-1} rhs.
struct RexiInput
{
	const PrognosticState *rhs = nullptr;
	std::span<const Complex> betas;
};


/**
 * Term-parallel evaluation of REXI sums.
 *
 * For each pole n the worker owning n forms sum_k beta^k_n v_k and solves
 * one shifted system. With the fixed-tree reduce the per-term results are
 * summed by a pairwise tree over n, split across workers by coefficient
 * ranges, so the result does not depend on K or on scheduling.
 *
 * Real-origin inputs with conjugate-symmetric poles and weights are solved
 * on the m >= 0 half of the spectrum; the sum is real up to round-off and
 * the discarded imaginary residue is reported by last_imag_residue().
 */
class RexiExecutor
{
public:
	RexiExecutor(const ShiftedSolver &solver, int num_workers, ReduceMode mode = ReduceMode::FixedTree);

	int num_workers() const { return workers_; }
	ReduceMode mode() const { return mode_; }

	PrognosticState apply(TermGroup group, double dt, const RexiCoefficients &coeffs, const PrognosticState &u,
			TimingBreakdown *timing = nullptr) const;

	PrognosticState apply(TermGroup group, double dt, std::span<const Complex> alphas, std::span<const RexiInput> inputs,
			TimingBreakdown *timing = nullptr) const;

	/// Largest imaginary residue (relative to the result) dropped by the last real-origin apply.
	double last_imag_residue() const { return last_residue_; }

private:
	const ShiftedSolver &solver_;
	int workers_;
	ReduceMode mode_;
	mutable double last_residue_ = 0;
};

/// True if poles and every weight set map onto their conjugates under one index permutation.
bool conjugate_symmetric(std::span<const Complex> alphas, std::span<const RexiInput> inputs, double tol = 1e-12);


struct AmdahlRow
{
	int workers = 0;
	double measured_speedup = 0;
	double projected_speedup = 0;
};

struct AmdahlReport
{
	double serial_fraction = 0;		///< of the K = 1 run
	double max_speedup = 0;			///< 1 / serial_fraction
	std::vector<AmdahlRow> rows;
};

/**
 * Serial part = nonlinearities + broadcast + reduce + everything outside REXI,
 * parallel part = term_solves, both from the run with the fewest workers.
 * effective_processors(K) caps K at the hardware concurrency.
 */
AmdahlReport amdahl_report(std::span<const std::pair<int, TimingBreakdown>> runs, int hardware_threads = 0);

}	// namespace swe
