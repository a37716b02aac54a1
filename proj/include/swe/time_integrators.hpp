#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "swe/linear_solvers.hpp"
#include "swe/model.hpp"
#include "swe/parallel_rexi.hpp"
#include "swe/rexi_coefficients.hpp"

namespace swe {

enum class LinearMethod
{
	Erk,	///< explicit Runge-Kutta
	Irk,	///< Crank-Nicolson
	Rexi,	///< rational approximation of the exponential
};

enum class RemainderMethod
{
	None,
	Erk,	///< explicit Runge-Kutta inside a Strang split
	Etdrk,	///< exponential time differencing, hosted by the REXI linear part
};

enum class SplitVersion
{
	None,
	Ver0,	///< L(dt/2) N(dt) L(dt/2)
	Ver1,	///< N(dt/2) L(dt) N(dt/2)
};

/**
 * Decomposition of a stepper identifier such as "lg_irk_lc_n_erk_ver0".
 *
 * The first segment names the group integrated by linear_method; for a single
 * explicit segment ("ln_erk") that group may include the nonlinear term.
 * A second segment names the remainder, integrated by ERK inside a Strang
 * split (ver0/ver1 required) or by ETD2RK around a REXI linear part.
 * A single segment covering only part of the terms integrates just those.
 */
struct TimeStepperSpec
{
	TermGroup linear_group = TermGroup::None;
	LinearMethod linear_method = LinearMethod::Erk;
	TermGroup remainder_group = TermGroup::None;
	RemainderMethod remainder_method = RemainderMethod::None;
	SplitVersion split_version = SplitVersion::None;
	int order = 2;		///< 4 only for a single explicit segment ("erk4")

	TermGroup covered() const { return linear_group | remainder_group; }
	bool is_split() const { return split_version != SplitVersion::None; }

	/// Throws ParseError describing the first violated rule.
	void validate() const;

	bool operator==(const TimeStepperSpec &) const = default;
};

/// Grammar: (<group>_<method>)+ with optional _ver0 / _ver1.
/// Groups lg, lc, l, n, ln may be concatenated within a segment ("lc_n"); "rk2" is read as "erk".
TimeStepperSpec parse_stepper_id(std::string_view id);
std::string format_stepper_id(const TimeStepperSpec &spec);

std::string to_string(LinearMethod m);
std::string to_string(RemainderMethod m);
std::string to_string(SplitVersion v);


// Generic single-step explicit schemes; State needs +, and double * State.

template <class State, class Rhs>
State erk2_step(const Rhs &f, const State &u, double dt)
{
	const State k1 = f(u);
	return u + dt * f(u + (0.5 * dt) * k1);
}

template <class State, class Rhs>
State rk4_step(const Rhs &f, const State &u, double dt)
{
	const State k1 = f(u);
	const State k2 = f(u + (0.5 * dt) * k1);
	const State k3 = f(u + (0.5 * dt) * k2);
	const State k4 = f(u + dt * k3);
	return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Crank-Nicolson: (I - dt/2 L)^{-1} (I + dt/2 L) u for group lg or l.
PrognosticState irk_cn_step(const ShiftedSolver &solver, TermGroup group, const PrognosticState &u, double dt);

/// sum_n beta_n (dt L + alpha_n)^{-1} u.
PrognosticState rexi_step(const RexiExecutor &executor, TermGroup group, const PrognosticState &u, double dt,
		const RexiCoefficients &coeffs, TimingBreakdown *timing = nullptr);

using StateRhs = std::function<PrognosticState(const PrognosticState &)>;

/// psi coefficient sets on one contour, indexed by PhiFunction.
struct PsiCoefficients
{
	RexiCoefficients psi0, psi1, psi2;
};

/**
 * ETD2RK:
 *   A  = psi0(dt L) u + dt psi1(dt L) N(u)
 *   u' = A + dt psi2(dt L) (N(A) - N(u))
 */
PrognosticState etdrk2_step(const RexiExecutor &executor, TermGroup linear_group, const StateRhs &nonlinear,
		const PrognosticState &u, double dt, const PsiCoefficients &coeffs, TimingBreakdown *timing = nullptr);


/// REXI contour choice. Fixed: circle through p0 and +-i p1_imag.
/// Radius-scaled: origin circle with R = max(min_radius, 30 dt / 480).
struct RexiOptions
{
	double p0 = 10;
	double p1_imag = 30;
	int num_poles = 128;
	bool radius_scaling = false;
	double min_radius = 5;
	int workers = 1;
	ReduceMode reduce = ReduceMode::FixedTree;

	ContourSpec contour(double dt) const;
	void validate() const;
};


/**
 * One time step of a composed scheme. Holds the solver, the REXI executor and
 * the coefficient sets for every substep size it uses.
 */
class Stepper
{
public:
	Stepper(const SweModel &model, const TimeStepperSpec &spec, double dt, const RexiOptions &rexi = {});

	const SweModel &model() const { return model_; }
	const TimeStepperSpec &spec() const { return spec_; }
	double dt() const { return dt_; }
	const RexiOptions &rexi_options() const { return rexi_; }

	/// Throws DivergenceError naming the substep if a non-finite value appears.
	PrognosticState step(const PrognosticState &u) const;

	/// Accumulated over all steps since construction or reset.
	const TimingBreakdown &timings() const { return timing_; }
	void reset_timings() const { timing_ = {}; }

	/// Largest imaginary residue dropped by a REXI sum in the last step.
	double last_imag_residue() const { return residue_; }

private:
	PrognosticState linear_substep(const PrognosticState &u, double h) const;
	PrognosticState remainder_substep(const PrognosticState &u, double h) const;
	PrognosticState remainder_tendency(const PrognosticState &u) const;
	const PsiCoefficients &coefficients(double h) const;

	const SweModel &model_;
	TimeStepperSpec spec_;
	double dt_;
	RexiOptions rexi_;
	ShiftedSolver solver_;
	RexiExecutor executor_;
	std::map<double, PsiCoefficients> coeffs_;
	mutable TimingBreakdown timing_;
	mutable double residue_ = 0;
};


/// Divergence test: any non-finite coefficient or grid max |Phi'| above the threshold.
bool diverged(const SweModel &model, const PrognosticState &u, double phi_threshold = 1e6);

using StepObserver = std::function<void(int step, double time, const PrognosticState &u)>;

struct IntegrationResult
{
	PrognosticState state;		///< final state, or the first diverged one
	int steps = 0;
	double time = 0;
	bool diverged = false;
	std::string diagnostic;
};

/**
 * Steps from 0 to t_end; t_end must be a whole number of steps.
 * Observers see the initial state and every completed step (steps + 1 calls).
 * Divergence stops the run early and is reported in the result.
 */
IntegrationResult integrate(const Stepper &stepper, const PrognosticState &u0, double t_end,
		std::span<const StepObserver> observers = {});

}	// namespace swe
