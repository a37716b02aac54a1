#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/special_functions/spherical_harmonic.hpp>
#include <CLI11.hpp>

#include "swe/benchmarks.hpp"
#include "swe/errors.hpp"
#include "swe/linear_solvers.hpp"
#include "swe/parallel_rexi.hpp"
#include "swe/rexi_coefficients.hpp"
#include "swe/time_integrators.hpp"

using namespace swe;

namespace {

// Tolerances and budgets.
constexpr double roundtrip_tol = 1e-11;
constexpr double laplacian_tol = 1e-13;
constexpr double harmonic_tol = 1e-11;
constexpr double rexi_error_bound = 6e-4;
constexpr double cancellation_slope_tol = 0.1;
constexpr double linear_rexi_tol = 1e-6;
constexpr double cn_factor = 10;
constexpr double solve_lg_tol = 1e-12;
constexpr double solve_l_tol = 1e-10;
constexpr double dense_tol = 1e-9;
constexpr double order_target = 2, order_tol = 0.2;
constexpr double filter_m = 100;
constexpr int stiffness_violations = 1;
constexpr double term_solve_ratio = 0.6;
constexpr double amdahl_tol = 0.3;

const std::vector<double> desk_dt_grid{120, 240, 360, 480, 600, 720, 900, 1200, 1800, 2400, 3600, 5400, 7200, 10800};

struct Outcome
{
	bool pass = false;
	std::string detail;
};

struct Criterion
{
	int number;
	double budget_s;
	std::function<Outcome()> run;
};

std::string fmt(const char *f, auto... args)
{
	char buf[512];
	std::snprintf(buf, sizeof buf, f, args...);
	return buf;
}

SpectralField random_field(int trunc, std::mt19937_64 &rng, double scale = 1, bool zero_mean = false,
		ValueKind kind = ValueKind::Real)
{
	std::normal_distribution<double> nd(0, scale);
	SpectralField f(trunc, kind);
	for (int m = f.min_m(); m <= trunc; ++m)
		for (auto &c : f.block(m))
			c = (kind == ValueKind::Real && m == 0) ? Complex(nd(rng), 0) : Complex(nd(rng), nd(rng));
	if (zero_mean)
		f(0, 0) = 0;
	return f;
}

PrognosticState random_state(int trunc, std::mt19937_64 &rng, ValueKind kind = ValueKind::Real)
{
	return {random_field(trunc, rng, 100, true, kind), random_field(trunc, rng, 1e-5, true, kind),
			random_field(trunc, rng, 1e-6, true, kind)};
}

/// Largest per-field relative difference.
double rel_err(const PrognosticState &a, const PrognosticState &ref)
{
	auto one = [](const SpectralField &x, const SpectralField &y) {
		const SpectralField xc = x.is_real() ? x.to_complex() : x;
		const SpectralField yc = y.is_real() ? y.to_complex() : y;
		const double scale = yc.max_abs();
		return scale == 0 ? xc.max_abs() : max_abs_diff(xc, yc) / scale;
	};
	return std::max({one(a.phi_pert, ref.phi_pert), one(a.vort, ref.vort), one(a.div, ref.div)});
}

/// Least-squares slope of log y against log x (or against x itself).
double fitted_slope(const std::vector<double> &x, const std::vector<double> &y, bool log_x = true)
{
	const double n = double(x.size());
	double sx = 0, sy = 0, sxx = 0, sxy = 0;
	for (std::size_t i = 0; i < x.size(); ++i)
	{
		const double xi = log_x ? std::log(x[i]) : x[i], yi = std::log(y[i]);
		sx += xi, sy += yi, sxx += xi * xi, sxy += xi * yi;
	}
	return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool bitwise_equal(const SpectralField &a, const SpectralField &b)
{
	return a.size() == b.size() && std::memcmp(a.data().data(), b.data().data(), a.data().size_bytes()) == 0;
}

bool bitwise_equal(const PrognosticState &a, const PrognosticState &b)
{
	return bitwise_equal(a.phi_pert, b.phi_pert) && bitwise_equal(a.vort, b.vort) && bitwise_equal(a.div, b.div);
}

BenchmarkSpec barotropic(double hours)
{
	auto s = default_benchmark(BenchmarkName::BarotropicInstability);
	s.horizon_hours = hours;
	return s;
}


Outcome spectral_kernel()
{
	const int T = 42;
	Sphere sphere(SphereConfig::for_truncation(T));
	std::mt19937_64 rng(42);

	double roundtrip = 0;
	for (int k = 0; k < 50; ++k)
	{
		const auto f = random_field(T, rng);
		roundtrip = std::max(roundtrip, max_abs_diff(sphere.analysis(sphere.synthesis(f)), f) / f.max_abs());
	}

	const double a = sphere.radius();
	double lap = 0;
	for (int l = 0; l <= T; ++l)
		for (int m = 0; m <= l; ++m)
		{
			SpectralField e = sphere.make_spectral();
			e(l, m) = Complex(1, m > 0 ? 0.5 : 0);
			SpectralField r = sphere.laplacian(e);
			const double eig = -l * (l + 1.0) / (a * a);
			const double scale = std::max(std::abs(eig), 1e-300);
			lap = std::max(lap, std::abs(r(l, m) - eig * e(l, m)) / (scale * std::abs(e(l, m))));
			r(l, m) = 0;
			lap = std::max(lap, r.max_abs() / scale);
		}

	// Synthesis against Boost's harmonics (Condon-Shortley phase removed, real part doubled for m > 0).
	double harm = 0;
	for (int l : {0, 1, 2, 5, 13, 21, 34, 42})
		for (int m = 0; m <= l; ++m)
		{
			SpectralField e = sphere.make_spectral();
			e(l, m) = 1;
			const GridField g = sphere.synthesis(e);
			const double cs = (m % 2) ? -1.0 : 1.0;
			for (int j = 0; j < sphere.nlat(); ++j)
				for (int k = 0; k < sphere.nlon(); ++k)
				{
					const double y = boost::math::spherical_harmonic_r(unsigned(l), m, std::acos(sphere.mu()[j]),
							sphere.longitude(k));
					harm = std::max(harm, std::abs(g(j, k) - (m > 0 ? 2 : 1) * cs * y));
				}
		}

	return {roundtrip <= roundtrip_tol && lap <= laplacian_tol && harm <= harmonic_tol,
			fmt("T42 roundtrip max rel %.2e (<= %.0e), laplacian max rel %.2e (<= %.0e), synthesis vs Boost Y_lm %.2e",
					roundtrip, roundtrip_tol, lap, laplacian_tol, harm)};
}


Outcome rexi_fidelity()
{
	const double p0 = 10, p1 = 30;
	const int N = 128;
	const auto contour = shifted_contour_from_points(p0, p1, N);
	const auto c = contour_coeffs(PhiFunction::Psi0, contour);

	// Independent nodes and weights from the trapezoidal rule on the same circle.
	const double R = (p0 * p0 + p1 * p1) / (2 * p0), mu = p0 - R;
	double coeff_diff = 0;
	for (int n = 1; n <= N; ++n)
	{
		const Complex z = R * std::polar(1.0, 2 * std::numbers::pi * n / N) + mu;
		const Complex alpha = -z, beta = -(R * std::polar(1.0, 2 * std::numbers::pi * n / N)) * std::exp(z) / double(N);
		const auto it = std::min_element(c.alphas.begin(), c.alphas.end(),
				[&](Complex x, Complex y) { return std::abs(x - alpha) < std::abs(y - alpha); });
		const auto i = std::size_t(it - c.alphas.begin());
		coeff_diff = std::max({coeff_diff, std::abs(c.alphas[i] - alpha) / std::abs(alpha),
				std::abs(c.betas[i] - beta) / std::abs(beta)});
	}

	// Dense evaluation on i[-25, 25] against exp and against the geometric aliasing prediction.
	double err = 0, predicted = 0;
	for (int k = 0; k <= 20000; ++k)
	{
		const double y = -25 + 50.0 * k / 20000;
		Complex sum = 0;
		for (std::size_t n = 0; n < c.size(); ++n)
			sum += c.betas[n] / (Complex(0, y) + c.alphas[n]);
		err = std::max(err, std::abs(sum - std::exp(Complex(0, y))));
		const double rho = std::pow(std::abs(Complex(-mu, y)) / R, N);
		predicted = std::max(predicted, rho / (1 - rho));
	}

	std::vector<double> radii{10, 20, 30, 40}, logs;
	for (double r : radii)
		logs.push_back(cancellation_diagnostic(r, N).log_max_abs_beta);
	std::vector<double> betas;
	for (double lg : logs)
		betas.push_back(std::exp(lg));
	const double slope = fitted_slope(radii, betas, false);
	const double shifted_beta = cancellation_diagnostic(c).max_abs_beta;

	const bool pass = coeff_diff <= 1e-12 && err <= rexi_error_bound && std::abs(err / predicted - 1) <= 0.05
			&& std::abs(slope - 1) <= cancellation_slope_tol && shifted_beta <= std::exp(p0 + 1);
	return {pass, fmt("max|rational - exp| on i[-25,25] = %.3e (frozen bound %.0e, aliasing prediction %.3e); "
					"independent coefficients rel diff %.1e; unshifted log max|beta| slope %.3f; "
					"shifted max|beta| %.3e <= e^%g = %.3e",
					err, rexi_error_bound, predicted, coeff_diff, slope, shifted_beta, p0 + 1, std::exp(p0 + 1))};
}


/// Exact solution of the gravity-wave system, one 2x2 rotation per coefficient.
PrognosticState exact_lg(const PrognosticState &u, double t, double phibar, double a)
{
	PrognosticState v = u;
	for (int m = 0; m <= u.trunc(); ++m)
		for (int l = std::max(m, 1); l <= u.trunc(); ++l)
		{
			const double ll = l * (l + 1.0) / (a * a), w = std::sqrt(phibar * ll);
			const Complex p = u.phi_pert(l, m), d = u.div(l, m);
			v.phi_pert(l, m) = p * std::cos(w * t) - phibar * d / w * std::sin(w * t);
			v.div(l, m) = d * std::cos(w * t) + ll * p / w * std::sin(w * t);
		}
	return v;
}

Outcome linear_exactness()
{
	const int T = 21;
	const double dt = 3600;
	const auto spec = barotropic(24);
	Sphere sphere(spec.sphere_config(T));
	SweModel model(sphere, spec.model_params());
	ShiftedSolver solver(model);
	RexiExecutor ex(solver, 1);
	const auto coeffs = contour_coeffs(PhiFunction::Psi0, shifted_contour_from_points(10, 30, 128));

	std::mt19937_64 rng(3);
	std::vector<PrognosticState> states{initial_state(sphere, spec), random_state(T, rng)};
	double e_rexi = 0, e_cn = 1e300, oracle_gap = 0;
	for (const auto &u : states)
	{
		const auto exact = exact_lg(u, dt, spec.mean_geopotential, sphere.radius());
		auto f = [&](const PrognosticState &x) { return model.tendency(TermGroup::LG, x); };
		PrognosticState fine = u;
		for (int i = 0; i < 3600; ++i)
			fine = rk4_step(f, fine, dt / 3600);
		oracle_gap = std::max(oracle_gap, rel_err(fine, exact));
		e_rexi = std::max(e_rexi, rel_err(rexi_step(ex, TermGroup::LG, u, dt, coeffs), exact));
		e_cn = std::min(e_cn, rel_err(irk_cn_step(solver, TermGroup::LG, u, dt), exact));
	}
	return {e_rexi <= linear_rexi_tol && e_cn >= cn_factor * e_rexi && oracle_gap <= 1e-9,
			fmt("T21 dt=3600 s: REXI rel err %.2e (<= %.0e), CN rel err %.2e (%.1e x REXI, need >= %g); "
					"analytic oracle vs RK4 dt=1 s %.1e",
					e_rexi, linear_rexi_tol, e_cn, e_cn / e_rexi, cn_factor, oracle_gap)};
}


Outcome solver_residuals()
{
	std::mt19937_64 rng(4);
	std::uniform_real_distribution<double> re(1, 50), im(-40, 40), step(300, 3600);
	std::bernoulli_distribution sign(0.5);
	auto random_alpha = [&] { return Complex(sign(rng) ? re(rng) : -re(rng), im(rng)); };

	const auto spec = barotropic(24);
	Sphere s21(spec.sphere_config(21));
	SweModel m21(s21, spec.model_params());
	ShiftedSolver solver(m21);
	double r_lg = 0, r_l = 0;
	for (int k = 0; k < 20; ++k)
	{
		const Complex alpha = random_alpha();
		const double dt = step(rng);
		const auto b = random_state(21, rng, k % 2 ? ValueKind::Complex : ValueKind::Real);
		r_lg = std::max(r_lg, rel_err(solver.apply({TermGroup::LG, dt, alpha}, solver.solve_lg(dt, alpha, b)), b));
		r_l = std::max(r_l, rel_err(solver.apply({TermGroup::L, dt, alpha}, solver.solve_l(dt, alpha, b)), b));
	}

	Sphere s10(spec.sphere_config(10));
	SweModel m10(s10, spec.model_params());
	ShiftedSolver solver10(m10);
	double dense = 0;
	for (auto group : {TermGroup::LG, TermGroup::L})
	{
		const double dt = 1800;
		const Eigen::MatrixXcd A = dense_operator_matrix(m10, group, dt);
		for (int k = 0; k < 5; ++k)
		{
			const Complex alpha = random_alpha();
			const auto b = random_state(10, rng, ValueKind::Complex);
			const Eigen::MatrixXcd M = A + alpha * Eigen::MatrixXcd::Identity(A.rows(), A.cols());
			const auto ref = unstack_state(M.partialPivLu().solve(stack_state(b)), 10);
			const auto x = group == TermGroup::LG ? solver10.solve_lg(dt, alpha, b) : solver10.solve_l(dt, alpha, b);
			dense = std::max(dense, rel_err(x, ref));
		}
	}
	return {r_lg <= solve_lg_tol && r_l <= solve_l_tol && dense <= dense_tol,
			fmt("T21 residuals: lg %.2e (<= %.0e), l %.2e (<= %.0e); T10 dense LU agreement %.2e (<= %.0e)", r_lg,
					solve_lg_tol, r_l, solve_l_tol, dense, dense_tol)};
}


Outcome convergence_orders()
{
	const int T = 21;
	const auto spec = barotropic(6);
	Sphere sphere(spec.sphere_config(T));
	SweModel model(sphere, spec.model_params());
	const auto ref = reference_solution(sphere, spec, 15, "");
	const std::vector<std::string> ids{"ln_erk", "lg_irk_lc_n_erk_ver0", "lg_rexi_lc_n_erk_ver1", "lg_rexi_lc_n_etdrk"};
	const std::vector<double> dts{75, 150, 225, 300};
	const auto rows = run_sweep(ids, dts, spec, model, initial_state(sphere, spec), ref);

	bool pass = true;
	std::ostringstream d;
	d << "T21 6 h, dt {75,150,225,300}, RK4 ref dt=15 s:";
	for (const auto &id : ids)
	{
		std::vector<double> x, y;
		for (const auto &r : rows)
			if (r.stepper_id == id && r.status == RowStatus::Ok)
				x.push_back(r.dt), y.push_back(r.linf_h);
		const double slope = x.size() == dts.size() ? fitted_slope(x, y) : NAN;
		pass = pass && std::abs(slope - order_target) <= order_tol;
		d << fmt(" %s %.3f", id.c_str(), slope);
	}
	return {pass, d.str()};
}


/// Completes the horizon without divergence.
bool completes(const SweModel &model, const PrognosticState &u0, const std::string &id, double dt, double t_end)
{
	try
	{
		Stepper st(model, parse_stepper_id(id), dt);
		return !integrate(st, u0, t_end).diverged;
	}
	catch (const DivergenceError &)
	{
		return false;
	}
}

Outcome stability_ordering()
{
	const int T = 42;
	const auto spec = barotropic(24);
	Sphere sphere(spec.sphere_config(T));
	SweModel model(sphere, spec.model_params());
	const auto u0 = initial_state(sphere, spec);
	const double t_end = spec.horizon_seconds();

	std::map<std::string, std::vector<bool>> ok;
	const std::vector<std::string> ids{"ln_erk", "lg_irk_lc_n_erk_ver0", "lg_irk_lc_n_erk_ver1",
			"lg_rexi_lc_n_erk_ver0", "lg_rexi_lc_n_erk_ver1", "lg_rexi_lc_n_etdrk"};
	for (const auto &id : ids)
		for (double dt : desk_dt_grid)
			ok[id].push_back(completes(model, u0, id, dt, t_end));

	auto max_stable = [&](const std::string &id) {
		double best = 0;
		for (std::size_t i = 0; i < desk_dt_grid.size() && ok[id][i]; ++i)
			best = desk_dt_grid[i];
		return best;
	};
	auto witness = [&](const std::string &family) {
		for (std::size_t i = 0; i < desk_dt_grid.size(); ++i)
			if (ok[family + "_ver1"][i] && !ok[family + "_ver0"][i])
				return desk_dt_grid[i];
		return 0.0;
	};
	const double w_irk = witness("lg_irk_lc_n_erk"), w_rexi = witness("lg_rexi_lc_n_erk");
	const double explicit_max = max_stable("ln_erk");
	double implicit_min = 1e300;
	std::ostringstream d;
	d << "T42 24 h: ver1-completes/ver0-diverges at dt=" << w_irk << " (irk), " << w_rexi
	  << " (rexi); max stable dt: ln_erk " << explicit_max;
	for (const auto &id : ids)
		if (id != "ln_erk")
		{
			implicit_min = std::min(implicit_min, max_stable(id));
			d << ", " << id << " " << max_stable(id);
		}
	return {w_irk > 0 && w_rexi > 0 && explicit_max > 0 && explicit_max < implicit_min, d.str()};
}


Outcome error_ordering()
{
	const int T = 42;
	const auto spec = barotropic(24);
	Sphere sphere(spec.sphere_config(T));
	SweModel model(sphere, spec.model_params());
	const auto ref = reference_solution(sphere, spec, 15, "");
	std::vector<double> grid;
	for (double dt : desk_dt_grid)
		if (dt <= 3600)
			grid.push_back(dt);
	const std::string rexi = "lg_rexi_lc_n_erk_ver1", irk = "lg_irk_lc_n_erk_ver0";
	SweepOptions opts;
	opts.filter_threshold_m = filter_m;
	const auto rows = run_sweep({rexi, irk}, grid, spec, model, initial_state(sphere, spec), ref, opts);
	std::map<std::pair<std::string, double>, const SweepRow *> by;
	for (const auto &r : rows)
		by[{r.stepper_id, r.dt}] = &r;

	double dt_both = 0;
	for (double dt : grid)
		if (by[{rexi, dt}]->status == RowStatus::Ok && by[{irk, dt}]->status == RowStatus::Ok)
			dt_both = dt;
	if (dt_both == 0)
		return {false, "no dt on the grid where both complete within the 100 m filter"};
	const double er = by[{rexi, dt_both}]->linf_h, ei = by[{irk, dt_both}]->linf_h;
	return {er < ei, fmt("T42 24 h, largest dt stable for both (completes, error <= %g m) = %g s: %s %.4g m vs %s %.4g m",
			filter_m, dt_both, rexi.c_str(), er, irk.c_str(), ei)};
}


Outcome stiffness_trend()
{
	const int T = 42;
	const double dt = 600;
	const std::string id = "lg_rexi_lc_n_erk_ver1";
	std::vector<double> errs;
	std::ostringstream d;
	d << "T42 24 h " << id << " dt=" << dt << " s, linf_h by Phibar/g:";
	for (const auto &spec : stiffness_sweep_configs(barotropic(24)))
	{
		Sphere sphere(spec.sphere_config(T));
		SweModel model(sphere, spec.model_params());
		const auto ref = reference_solution(sphere, spec, 15, "");
		const auto rows = run_sweep({id}, {dt}, spec, model, initial_state(sphere, spec), ref);
		errs.push_back(rows.at(0).status == RowStatus::Ok ? rows[0].linf_h : NAN);
		d << fmt(" %.0f:%.3g", spec.mean_geopotential / spec.gravity, errs.back());
	}
	int violations = 0;
	for (std::size_t i = 1; i < errs.size(); ++i)
		if (!(errs[i] >= errs[i - 1]))
			++violations;
	d << "; adjacent decreases " << violations << " (<= " << stiffness_violations << ")";
	return {violations <= stiffness_violations, d.str()};
}


Outcome parallel_rexi()
{
	const int T = 42, steps = 100, repeats = 5;
	const double dt = 300;
	const auto spec = barotropic(24);
	Sphere sphere(spec.sphere_config(T));
	SweModel model(sphere, spec.model_params());
	const auto u0 = initial_state(sphere, spec);
	const auto id = parse_stepper_id("lg_rexi_lc_n_erk_ver1");
	const int hw = int(std::max(1u, std::thread::hardware_concurrency()));

	const std::vector<int> ks{1, 2, 4, 8};
	std::vector<std::unique_ptr<Stepper>> steppers;
	for (int k : ks)
	{
		RexiOptions opts;
		opts.workers = k;
		steppers.push_back(std::make_unique<Stepper>(model, id, dt, opts));
	}

	// Rounds visit every K in turn.
	std::vector<std::vector<TimingBreakdown>> runs(ks.size());
	std::optional<PrognosticState> first;
	bool identical = true, closure = true;
	for (int r = 0; r < repeats; ++r)
		for (std::size_t i = 0; i < ks.size(); ++i)
		{
			steppers[i]->reset_timings();
			const auto res = integrate(*steppers[i], u0, steps * dt);
			if (res.diverged)
				return {false, "diverged: " + res.diagnostic};
			runs[i].push_back(steppers[i]->timings());
			closure = closure && runs[i].back().closure_holds();
			if (!first)
				first = res.state;
			else
				identical = identical && bitwise_equal(*first, res.state);
		}
	std::vector<std::pair<int, TimingBreakdown>> best;
	for (std::size_t i = 0; i < ks.size(); ++i)
		best.emplace_back(ks[i], min_timings(runs[i]));

	const auto report = amdahl_report(best, hw);
	double worst = 0;
	std::ostringstream d;
	d << "T42 " << steps << " steps dt=" << dt << " s, K {1,2,4,8}: bitwise " << (identical ? "identical" : "DIFFERENT")
	  << ", closure " << (closure ? "holds" : "VIOLATED") << ", speedup measured/projected";
	for (const auto &row : report.rows)
	{
		worst = std::max(worst, std::abs(row.projected_speedup - row.measured_speedup) / row.measured_speedup);
		d << fmt(" K%d %.2f/%.2f", row.workers, row.measured_speedup, row.projected_speedup);
	}
	d << fmt(" (max deviation %.0f%%, <= %.0f%%)", 100 * worst, 100 * amdahl_tol);
	bool timing_ok = true;
	if (hw >= 8)
	{
		const double ratio = best.back().second.term_solves / best.front().second.term_solves;
		timing_ok = ratio <= term_solve_ratio;
		d << fmt("; term_solves K8/K1 %.2f (<= %.1f)", ratio, term_solve_ratio);
	}
	else
		d << "; term_solves K8/K1 sub-check not applicable (" << hw << " hardware threads < 8)";
	return {identical && closure && worst <= amdahl_tol && timing_ok, d.str()};
}


struct IdCase
{
	std::string id;
	std::string canonical;
	TermGroup linear_group;
	LinearMethod linear_method;
	TermGroup remainder_group;
	RemainderMethod remainder_method;
	SplitVersion version;
};

Outcome nomenclature()
{
	using enum TermGroup;
	const std::vector<IdCase> table{
		{"ln_erk", "ln_erk", All, LinearMethod::Erk, None, RemainderMethod::None, SplitVersion::None},
		{"ln_rk2", "ln_erk", All, LinearMethod::Erk, None, RemainderMethod::None, SplitVersion::None},
		{"lg_irk_lc_n_erk_ver0", "lg_irk_lc_n_erk_ver0", LG, LinearMethod::Irk, LcN, RemainderMethod::Erk,
				SplitVersion::Ver0},
		{"lg_irk_lc_n_erk_ver1", "lg_irk_lc_n_erk_ver1", LG, LinearMethod::Irk, LcN, RemainderMethod::Erk,
				SplitVersion::Ver1},
		{"lg_rexi_lc_n_erk_ver0", "lg_rexi_lc_n_erk_ver0", LG, LinearMethod::Rexi, LcN, RemainderMethod::Erk,
				SplitVersion::Ver0},
		{"lg_rexi_lc_n_erk_ver1", "lg_rexi_lc_n_erk_ver1", LG, LinearMethod::Rexi, LcN, RemainderMethod::Erk,
				SplitVersion::Ver1},
		{"lg_rexi_lc_n_etdrk", "lg_rexi_lc_n_etdrk", LG, LinearMethod::Rexi, LcN, RemainderMethod::Etdrk,
				SplitVersion::None},
		{"l_irk_n_erk_ver0", "l_irk_n_erk_ver0", L, LinearMethod::Irk, N, RemainderMethod::Erk, SplitVersion::Ver0},
		{"l_irk_n_erk_ver1", "l_irk_n_erk_ver1", L, LinearMethod::Irk, N, RemainderMethod::Erk, SplitVersion::Ver1},
		{"l_rexi_n_erk_ver0", "l_rexi_n_erk_ver0", L, LinearMethod::Rexi, N, RemainderMethod::Erk, SplitVersion::Ver0},
		{"l_rexi_n_erk_ver1", "l_rexi_n_erk_ver1", L, LinearMethod::Rexi, N, RemainderMethod::Erk, SplitVersion::Ver1},
		{"l_rexi_n_etdrk", "l_rexi_n_etdrk", L, LinearMethod::Rexi, N, RemainderMethod::Etdrk, SplitVersion::None},
	};

	const int T = 10;
	const double dt = 600;
	const auto spec = barotropic(24);
	Sphere sphere(spec.sphere_config(T));
	SweModel model(sphere, spec.model_params());
	ShiftedSolver solver(model);
	RexiExecutor ex(solver, 1);
	const auto contour = shifted_contour_from_points(10, 30, 128);
	const PsiCoefficients psi{contour_coeffs(PhiFunction::Psi0, contour), contour_coeffs(PhiFunction::Psi1, contour),
			contour_coeffs(PhiFunction::Psi2, contour)};
	const auto u = initial_state(sphere, spec);

	int failures = 0;
	std::ostringstream bad;
	for (const auto &c : table)
	{
		std::string why;
		try
		{
			const auto s = parse_stepper_id(c.id);
			if (s.linear_group != c.linear_group || s.linear_method != c.linear_method
					|| s.remainder_group != c.remainder_group || s.remainder_method != c.remainder_method
					|| s.split_version != c.version)
				why = "fields";
			else if (format_stepper_id(s) != c.canonical || !(parse_stepper_id(format_stepper_id(s)) == s))
				why = "round-trip";
			else
			{
				auto lin = [&](const PrognosticState &x, double h) {
					return c.linear_method == LinearMethod::Irk ? irk_cn_step(solver, c.linear_group, x, h)
							: c.linear_method == LinearMethod::Rexi ? rexi_step(ex, c.linear_group, x, h, psi.psi0)
							: erk2_step([&](const PrognosticState &y) { return model.tendency(c.linear_group, y); }, x, h);
				};
				const StateRhs rem_f = [&](const PrognosticState &y) { return model.tendency(c.remainder_group, y); };
				auto rem = [&](const PrognosticState &x, double h) { return erk2_step(rem_f, x, h); };
				PrognosticState want;
				if (c.remainder_method == RemainderMethod::None)
					want = lin(u, dt);
				else if (c.remainder_method == RemainderMethod::Etdrk)
					want = etdrk2_step(ex, c.linear_group, rem_f, u, dt, psi);
				else if (c.version == SplitVersion::Ver0)
					want = lin(rem(lin(u, dt / 2), dt), dt / 2);
				else
					want = rem(lin(rem(u, dt / 2), dt), dt / 2);
				if (!bitwise_equal(Stepper(model, s, dt).step(u), want))
					why = "dispatch";
			}
		}
		catch (const Error &e)
		{
			why = e.what();
		}
		if (!why.empty())
		{
			++failures;
			bad << " " << c.id << "(" << why << ")";
		}
	}
	return {failures == 0, fmt("%zu ids parse, round-trip and step bitwise as their compositions; failures: %d",
			table.size(), failures) + bad.str()};
}

}	// namespace


int main(int argc, char **argv)
{
	CLI::App app{"acceptance criteria"};
	std::vector<int> only;
	app.add_option("criteria", only, "criterion numbers to run (default all)")->check(CLI::Range(1, 10));
	CLI11_PARSE(app, argc, argv);

	const std::vector<Criterion> all{
		{1, 10, spectral_kernel},
		{2, 5, rexi_fidelity},
		{3, 60, linear_exactness},
		{4, 60, solver_residuals},
		{5, 900, convergence_orders},
		{6, 1200, stability_ordering},
		{7, 1200, error_ordering},
		{8, 1800, stiffness_trend},
		{9, 600, parallel_rexi},
		{10, 1, nomenclature},
	};

	int failed = 0;
	for (const auto &c : all)
	{
		if (!only.empty() && std::find(only.begin(), only.end(), c.number) == only.end())
			continue;
		const auto t0 = std::chrono::steady_clock::now();
		Outcome o;
		try
		{
			o = c.run();
		}
		catch (const std::exception &e)
		{
			o = {false, std::string("exception: ") + e.what()};
		}
		const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
		const bool in_budget = secs <= c.budget_s;
		const bool pass = o.pass && in_budget;
		failed += !pass;
		std::printf("criterion %d %s (%.1f s, budget %g s%s): %s\n", c.number, pass ? "PASS" : "FAIL", secs, c.budget_s,
				in_budget ? "" : ", OVER BUDGET", o.detail.c_str());
		std::fflush(stdout);
	}
	return failed == 0 ? 0 : 1;
}
