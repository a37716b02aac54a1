#pragma once

#include <string>
#include <string_view>

#include "swe/grid_field.hpp"
#include "swe/spectral_field.hpp"
#include "swe/sphere.hpp"

namespace swe {

/// Sets of right-hand-side terms, combinable as bit flags.
enum class TermGroup : unsigned
{
	None = 0,
	LG = 1,		///< linear gravity waves
	LC = 2,		///< linear Coriolis
	L = 3,		///< LG + LC
	N = 4,		///< nonlinear advection and divergence
	LgN = 5,
	LcN = 6,
	All = 7,
};

constexpr TermGroup operator|(TermGroup a, TermGroup b) { return TermGroup(unsigned(a) | unsigned(b)); }
constexpr TermGroup operator&(TermGroup a, TermGroup b) { return TermGroup(unsigned(a) & unsigned(b)); }
constexpr TermGroup complement(TermGroup g) { return TermGroup(~unsigned(g) & 7u); }
constexpr bool contains(TermGroup g, TermGroup part) { return (unsigned(g) & unsigned(part)) == unsigned(part); }
constexpr bool overlaps(TermGroup a, TermGroup b) { return (unsigned(a) & unsigned(b)) != 0; }

/// Canonical identifier: lg, lc, l, n, lg_n, lc_n, ln; "none" for the empty group.
std::string to_string(TermGroup g);

/// Accepts the canonical identifiers plus "all" and "+"-joined terms (e.g. "lc+n").
TermGroup parse_term_group(std::string_view s);


/// SWE state U = (Phi', zeta, delta) in spectral space.
struct PrognosticState
{
	SpectralField phi_pert;		///< geopotential perturbation, m^2/s^2
	SpectralField vort;			///< relative vorticity, 1/s
	SpectralField div;			///< divergence, 1/s

	PrognosticState() = default;
	explicit PrognosticState(int trunc, ValueKind kind = ValueKind::Real)
		: phi_pert(trunc, kind), vort(trunc, kind), div(trunc, kind)
	{
	}
	PrognosticState(SpectralField phi, SpectralField zeta, SpectralField delta)
		: phi_pert(std::move(phi)), vort(std::move(zeta)), div(std::move(delta))
	{
	}

	int trunc() const { return phi_pert.trunc(); }
	ValueKind kind() const { return phi_pert.kind(); }
	bool is_real() const { return phi_pert.is_real(); }

	PrognosticState to_complex() const;
	PrognosticState real_part() const;
	PrognosticState imag_part() const;

	bool all_finite() const;
	double max_abs() const;
	void set_zero();

	PrognosticState &operator+=(const PrognosticState &o);
	PrognosticState &operator-=(const PrognosticState &o);
	PrognosticState &operator*=(double s);
	PrognosticState &operator*=(Complex s);
	void axpy(double s, const PrognosticState &x);
	void axpy(Complex s, const PrognosticState &x);
};

PrognosticState operator+(PrognosticState a, const PrognosticState &b);
PrognosticState operator-(PrognosticState a, const PrognosticState &b);
PrognosticState operator*(double s, PrognosticState a);
PrognosticState operator*(Complex s, PrognosticState a);

double max_abs_diff(const PrognosticState &a, const PrognosticState &b);


struct ModelParams
{
	double mean_geopotential = 0;	///< Phi bar, m^2/s^2
};


/**
 * Right-hand side of the rotating shallow-water equations in
 * vorticity-divergence form, split as dU/dt = L_g U + L_c U + N(U):
 *
 *   L_g U = (-Phibar delta, 0, -lap Phi')
 *   L_c U = (0, -f delta - V.grad f, f zeta + k.(grad f x V))
 *   N(U)  = (-div(Phi' V), -div(zeta V), k.curl(zeta V) - lap(V.V/2))
 *
 * L_g is applied per mode in spectral space. L_c and N are evaluated
 * pseudo-spectrally: products on the dealiased grid, derivatives spectrally.
 * L_c uses the same flux form as N with f in place of zeta.
 */
class SweModel
{
public:
	SweModel(const Sphere &sphere, ModelParams params);

	const Sphere &sphere() const { return sphere_; }
	const ModelParams &params() const { return params_; }
	const SphereConfig &config() const { return sphere_.config(); }
	double mean_geopotential() const { return params_.mean_geopotential; }

	PrognosticState tendency_lg(const PrognosticState &u) const;
	PrognosticState tendency_lc(const PrognosticState &u) const;
	PrognosticState tendency_n(const PrognosticState &u) const;

	/// L_c evaluated in spectral space from mu-multiplication and mu-derivative recurrences.
	/// Accepts real- and complex-origin states; agrees with tendency_lc on real states.
	PrognosticState tendency_lc_spectral(const PrognosticState &u) const;

	/// Sum of the tendencies of all terms in the group; shares grid work between terms.
	PrognosticState tendency(TermGroup group, const PrognosticState &u) const;

	/// Tendency of a linear group on a real- or complex-origin state.
	/// Complex-origin states are split into real and imaginary physical parts.
	PrognosticState apply_linear(TermGroup group, const PrognosticState &u) const;

	PrognosticState zero_state(ValueKind kind = ValueKind::Real) const { return PrognosticState(sphere_.trunc(), kind); }

	/// Coriolis parameter on the grid.
	GridField coriolis_grid() const;

	/// Geopotential perturbation on the grid.
	GridField phi_grid(const PrognosticState &u) const { return sphere_.synthesis(u.phi_pert); }

	void check(const PrognosticState &u) const;

private:
	void add_flux_terms(const PrognosticState &u, bool coriolis, bool nonlinear, PrognosticState &out) const;

	const Sphere &sphere_;
	ModelParams params_;
};

}	// namespace swe
