#include "swe/time_integrators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <vector>

#include "swe/errors.hpp"

namespace swe {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
	return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::string> split_tokens(std::string_view id)
{
	std::vector<std::string> out;
	std::string token;
	std::istringstream is{std::string(id)};
	while (std::getline(is, token, '_'))
		out.push_back(token);
	if (!id.empty() && id.back() == '_')
		out.emplace_back();
	return out;
}

bool group_token(const std::string &t, TermGroup &g)
{
	if (t == "lg")
		g = TermGroup::LG;
	else if (t == "lc")
		g = TermGroup::LC;
	else if (t == "l")
		g = TermGroup::L;
	else if (t == "n")
		g = TermGroup::N;
	else if (t == "ln")
		g = TermGroup::All;
	else
		return false;
	return true;
}

bool method_token(const std::string &t)
{
	return t == "erk" || t == "rk2" || t == "erk4" || t == "irk" || t == "rexi" || t == "etdrk";
}

void check_finite(const PrognosticState &u, const char *where)
{
	if (!u.all_finite())
		throw DivergenceError(std::string("non-finite state after the ") + where + " substep");
}

}	// namespace


std::string to_string(LinearMethod m)
{
	switch (m)
	{
	case LinearMethod::Erk: return "erk";
	case LinearMethod::Irk: return "irk";
	case LinearMethod::Rexi: return "rexi";
	}
	return "?";
}

std::string to_string(RemainderMethod m)
{
	switch (m)
	{
	case RemainderMethod::None: return "none";
	case RemainderMethod::Erk: return "erk";
	case RemainderMethod::Etdrk: return "etdrk";
	}
	return "?";
}

std::string to_string(SplitVersion v)
{
	switch (v)
	{
	case SplitVersion::None: return "none";
	case SplitVersion::Ver0: return "ver0";
	case SplitVersion::Ver1: return "ver1";
	}
	return "?";
}


void TimeStepperSpec::validate() const
{
	if (linear_group == TermGroup::None)
		throw ParseError("stepper: no terms in the first segment");
	if (overlaps(linear_group, remainder_group))
		throw ParseError("stepper: overlapping groups '" + to_string(linear_group) + "' and '"
				+ to_string(remainder_group) + "'");
	if ((remainder_group == TermGroup::None) != (remainder_method == RemainderMethod::None))
		throw ParseError("stepper: remainder group and method must be given together");
	if (linear_method != LinearMethod::Erk && linear_group != TermGroup::LG && linear_group != TermGroup::L)
		throw ParseError("stepper: '" + to_string(linear_method) + "' needs group lg or l, got '"
				+ to_string(linear_group) + "'");
	if (order != 2 && order != 4)
		throw ParseError("stepper: order must be 2 or 4");
	if (order == 4 && (linear_method != LinearMethod::Erk || remainder_method != RemainderMethod::None))
		throw ParseError("stepper: 'erk4' only as a single explicit segment");

	switch (remainder_method)
	{
	case RemainderMethod::None:
		if (is_split())
			throw ParseError("stepper: '" + to_string(split_version) + "' needs two segments");
		break;
	case RemainderMethod::Erk:
		if (!is_split())
			throw ParseError("stepper: a split of '" + to_string(linear_group) + "' and '"
					+ to_string(remainder_group) + "' needs _ver0 or _ver1");
		break;
	case RemainderMethod::Etdrk:
		if (linear_method != LinearMethod::Rexi)
			throw ParseError("stepper: 'etdrk' needs a rexi linear part");
		if (is_split())
			throw ParseError("stepper: 'etdrk' takes no '" + to_string(split_version) + "'");
		break;
	}
	if (remainder_method != RemainderMethod::None)
	{
		if (contains(linear_group, TermGroup::N))
			throw ParseError("stepper: the first of two segments must be linear");
		if (covered() != TermGroup::All)
			throw ParseError("stepper: segments cover '" + to_string(covered()) + "', not all terms");
	}
}


TimeStepperSpec parse_stepper_id(std::string_view id)
{
	if (id.empty())
		throw ParseError("empty stepper id");
	std::vector<std::string> tokens = split_tokens(id);

	TimeStepperSpec spec;
	if (tokens.back() == "ver0" || tokens.back() == "ver1")
	{
		spec.split_version = tokens.back() == "ver0" ? SplitVersion::Ver0 : SplitVersion::Ver1;
		tokens.pop_back();
	}

	struct Segment
	{
		TermGroup group = TermGroup::None;
		std::string method;
	};
	std::vector<Segment> segments;
	Segment cur;
	for (const auto &t : tokens)
	{
		TermGroup g;
		if (group_token(t, g))
		{
			if (overlaps(cur.group, g))
				throw ParseError("stepper id '" + std::string(id) + "': token '" + t + "' repeats a term");
			cur.group = cur.group | g;
		}
		else if (method_token(t))
		{
			if (cur.group == TermGroup::None)
				throw ParseError("stepper id '" + std::string(id) + "': method '" + t + "' without terms");
			cur.method = t == "rk2" ? "erk" : t;
			segments.push_back(cur);
			cur = {};
		}
		else
			throw ParseError("stepper id '" + std::string(id) + "': unknown token '" + t + "'");
	}
	if (cur.group != TermGroup::None)
		throw ParseError("stepper id '" + std::string(id) + "': terms '" + to_string(cur.group) + "' lack a method");
	if (segments.empty() || segments.size() > 2)
		throw ParseError("stepper id '" + std::string(id) + "': expected one or two segments");

	const Segment &first = segments[0];
	spec.linear_group = first.group;
	if (first.method == "erk" || first.method == "erk4")
	{
		spec.linear_method = LinearMethod::Erk;
		spec.order = first.method == "erk4" ? 4 : 2;
	}
	else if (first.method == "irk")
		spec.linear_method = LinearMethod::Irk;
	else if (first.method == "rexi")
		spec.linear_method = LinearMethod::Rexi;
	else
		throw ParseError("stepper id '" + std::string(id) + "': '" + first.method + "' cannot lead");

	if (segments.size() == 2)
	{
		const Segment &second = segments[1];
		spec.remainder_group = second.group;
		if (second.method == "erk")
			spec.remainder_method = RemainderMethod::Erk;
		else if (second.method == "etdrk")
			spec.remainder_method = RemainderMethod::Etdrk;
		else
			throw ParseError("stepper id '" + std::string(id) + "': '" + second.method + "' cannot follow");
	}

	try
	{
		spec.validate();
	}
	catch (const ParseError &e)
	{
		throw ParseError("stepper id '" + std::string(id) + "': " + e.what());
	}
	return spec;
}


std::string format_stepper_id(const TimeStepperSpec &spec)
{
	spec.validate();
	std::string id = to_string(spec.linear_group) + "_"
			+ (spec.order == 4 ? std::string("erk4") : to_string(spec.linear_method));
	if (spec.remainder_method != RemainderMethod::None)
		id += "_" + to_string(spec.remainder_group) + "_" + to_string(spec.remainder_method);
	if (spec.is_split())
		id += "_" + to_string(spec.split_version);
	return id;
}


PrognosticState irk_cn_step(const ShiftedSolver &solver, TermGroup group, const PrognosticState &u, double dt)
{
	// (dt L - 2) x = -2 (I + dt/2 L) u
	PrognosticState rhs = u;
	rhs.axpy(0.5 * dt, solver.model().apply_linear(group, u));
	rhs *= -2.0;
	return solver.solve({group, dt, Complex(-2, 0)}, rhs);
}


PrognosticState rexi_step(const RexiExecutor &executor, TermGroup group, const PrognosticState &u, double dt,
		const RexiCoefficients &coeffs, TimingBreakdown *timing)
{
	if (coeffs.function != PhiFunction::Psi0)
		throw ConfigError("rexi_step: coefficients approximate " + to_string(coeffs.function) + ", not exp");
	return executor.apply(group, dt, coeffs, u, timing);
}


PrognosticState etdrk2_step(const RexiExecutor &executor, TermGroup linear_group, const StateRhs &nonlinear,
		const PrognosticState &u, double dt, const PsiCoefficients &c, TimingBreakdown *timing)
{
	if (c.psi0.function != PhiFunction::Psi0 || c.psi1.function != PhiFunction::Psi1
			|| c.psi2.function != PhiFunction::Psi2)
		throw ConfigError("etdrk2_step: coefficient sets must be psi0, psi1, psi2");
	if (c.psi0.alphas != c.psi1.alphas || c.psi0.alphas != c.psi2.alphas)
		throw ConfigError("etdrk2_step: psi coefficient sets must share one contour");

	const PrognosticState nu = dt * nonlinear(u);
	const RexiInput first[] = {{&u, c.psi0.betas}, {&nu, c.psi1.betas}};
	PrognosticState a = executor.apply(linear_group, dt, c.psi0.alphas, first, timing);

	const PrognosticState diff = dt * nonlinear(a) - nu;
	a += executor.apply(linear_group, dt, c.psi2, diff, timing);
	return a;
}


ContourSpec RexiOptions::contour(double dt) const
{
	if (radius_scaling)
		return origin_circle(scale_radius_with_dt(dt, 30.0, 480.0, min_radius), num_poles);
	return shifted_contour_from_points(p0, p1_imag, num_poles);
}

void RexiOptions::validate() const
{
	if (num_poles < 2)
		throw ConfigError("REXI: need at least two poles");
	if (workers < 1)
		throw ConfigError("REXI: need at least one worker");
	if (radius_scaling)
	{
		if (!(min_radius > 0))
			throw ConfigError("REXI: min_radius must be positive");
	}
	else if (!(p0 > 0) || !(p1_imag > 0))
		throw ConfigError("REXI: p0 and p1_imag must be positive");
}


Stepper::Stepper(const SweModel &model, const TimeStepperSpec &spec, double dt, const RexiOptions &rexi)
	: model_(model), spec_(spec), dt_(dt), rexi_(rexi), solver_(model), executor_(solver_, rexi.workers, rexi.reduce)
{
	spec_.validate();
	if (!(dt > 0) || !std::isfinite(dt))
		throw ConfigError("Stepper: dt must be positive and finite");
	if (spec_.linear_method != LinearMethod::Rexi)
		return;
	rexi_.validate();

	const double h = spec_.split_version == SplitVersion::Ver0 ? 0.5 * dt : dt;
	const ContourSpec contour = rexi_.contour(h);
	PsiCoefficients c{contour_coeffs(PhiFunction::Psi0, contour), {}, {}};
	if (spec_.remainder_method == RemainderMethod::Etdrk)
	{
		c.psi1 = contour_coeffs(PhiFunction::Psi1, contour);
		c.psi2 = contour_coeffs(PhiFunction::Psi2, contour);
	}
	if (spec_.linear_group == TermGroup::L)
		solver_.prepare(h, c.psi0.alphas, false);
	coeffs_.emplace(h, std::move(c));
}


const PsiCoefficients &Stepper::coefficients(double h) const
{
	auto it = coeffs_.find(h);
	if (it == coeffs_.end())
		throw ConfigError("Stepper: no REXI coefficients for substep " + std::to_string(h));
	return it->second;
}


PrognosticState Stepper::remainder_tendency(const PrognosticState &u) const
{
	const auto t0 = Clock::now();
	PrognosticState out = model_.tendency(spec_.remainder_group, u);
	timing_.nonlinearities += seconds_since(t0);
	return out;
}


PrognosticState Stepper::linear_substep(const PrognosticState &u, double h) const
{
	switch (spec_.linear_method)
	{
	case LinearMethod::Erk:
	{
		auto f = [this](const PrognosticState &x) { return model_.tendency(spec_.linear_group, x); };
		return erk2_step(f, u, h);
	}
	case LinearMethod::Irk:
		return irk_cn_step(solver_, spec_.linear_group, u, h);
	case LinearMethod::Rexi:
	{
		PrognosticState out = rexi_step(executor_, spec_.linear_group, u, h, coefficients(h).psi0, &timing_);
		residue_ = std::max(residue_, executor_.last_imag_residue());
		return out;
	}
	}
	throw ConfigError("Stepper: unknown linear method");
}


PrognosticState Stepper::remainder_substep(const PrognosticState &u, double h) const
{
	auto f = [this](const PrognosticState &x) { return remainder_tendency(x); };
	return erk2_step(f, u, h);
}


PrognosticState Stepper::step(const PrognosticState &u) const
{
	model_.check(u);
	const auto t0 = Clock::now();
	residue_ = 0;
	PrognosticState out;

	if (spec_.remainder_method == RemainderMethod::None)
	{
		if (spec_.order == 4)
		{
			auto f = [this](const PrognosticState &x) { return model_.tendency(spec_.linear_group, x); };
			out = rk4_step(f, u, dt_);
		}
		else
			out = linear_substep(u, dt_);
		check_finite(out, "single");
	}
	else if (spec_.remainder_method == RemainderMethod::Etdrk)
	{
		const StateRhs f = [this](const PrognosticState &x) { return remainder_tendency(x); };
		out = etdrk2_step(executor_, spec_.linear_group, f, u, dt_, coefficients(dt_), &timing_);
		residue_ = std::max(residue_, executor_.last_imag_residue());
		check_finite(out, "single");
	}
	else if (spec_.split_version == SplitVersion::Ver0)
	{
		out = linear_substep(u, 0.5 * dt_);
		check_finite(out, "first-half");
		out = remainder_substep(out, dt_);
		check_finite(out, "middle");
		out = linear_substep(out, 0.5 * dt_);
		check_finite(out, "second-half");
	}
	else
	{
		out = remainder_substep(u, 0.5 * dt_);
		check_finite(out, "first-half");
		out = linear_substep(out, dt_);
		check_finite(out, "middle");
		out = remainder_substep(out, 0.5 * dt_);
		check_finite(out, "second-half");
	}
	timing_.overall += seconds_since(t0);
	return out;
}


bool diverged(const SweModel &model, const PrognosticState &u, double phi_threshold)
{
	if (!u.all_finite())
		return true;
	return model.phi_grid(u).max_abs() > phi_threshold;
}


IntegrationResult integrate(const Stepper &stepper, const PrognosticState &u0, double t_end,
		std::span<const StepObserver> observers)
{
	const double dt = stepper.dt();
	if (!(t_end >= 0) || !std::isfinite(t_end))
		throw ConfigError("integrate: t_end must be finite and non-negative");
	const double k = std::round(t_end / dt);
	if (std::abs(k * dt - t_end) > 1e-9 * std::max(1.0, t_end))
		throw ConfigError("integrate: t_end " + std::to_string(t_end) + " is not a multiple of dt "
				+ std::to_string(dt));
	const int steps = static_cast<int>(k);

	IntegrationResult r;
	r.state = u0;
	for (const auto &obs : observers)
		obs(0, 0.0, r.state);
	for (int n = 1; n <= steps; ++n)
	{
		try
		{
			r.state = stepper.step(r.state);
		}
		catch (const DivergenceError &e)
		{
			r.diverged = true;
			r.diagnostic = "step " + std::to_string(n) + ": " + e.what();
			return r;
		}
		r.steps = n;
		r.time = n * dt;
		if (diverged(stepper.model(), r.state))
		{
			r.diverged = true;
			r.diagnostic = "step " + std::to_string(n) + ": geopotential perturbation exceeds threshold";
			return r;
		}
		for (const auto &obs : observers)
			obs(n, r.time, r.state);
	}
	return r;
}

}	// namespace swe
