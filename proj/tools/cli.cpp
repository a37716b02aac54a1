#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "swe/errors.hpp"
#include "swe/parallel_rexi.hpp"
#include "swe/rexi_coefficients.hpp"

namespace swe::cli {

namespace {

const std::vector<std::string> commands{"run", "sweep", "stiffness", "timing", "coeffs"};

std::string tag(double x)
{
	std::ostringstream os;
	os << std::setprecision(10) << x;
	std::string s = os.str();
	std::replace(s.begin(), s.end(), '.', 'p');
	return s;
}

template <class T>
std::string joined(const std::vector<T> &v)
{
	std::ostringstream os;
	os << std::setprecision(17);
	for (std::size_t i = 0; i < v.size(); ++i)
		os << (i ? "," : "") << v[i];
	return os.str();
}

void write_text(const std::filesystem::path &path, const std::string &text)
{
	std::ofstream f(path, std::ios::trunc | std::ios::binary);
	if (!f)
		throw ConfigError("cannot write " + path.string());
	f << text;
}

void write_json(const std::filesystem::path &path, const nlohmann::json &j)
{
	write_text(path, j.dump(2) + "\n");
}

/// Number of steps of size dt that first reaches t_end.
long long steps_to_cover(double t_end, double dt)
{
	const double q = t_end / dt;
	const double r = std::round(q);
	if (r >= 1 && std::abs(q - r) <= 1e-9 * r)
		return (long long)r;
	return std::max(1LL, (long long)std::ceil(q));
}

bool uses_rexi(const TimeStepperSpec &s)
{
	return s.linear_method == LinearMethod::Rexi || s.remainder_method == RemainderMethod::Etdrk;
}


struct Setup
{
	BenchmarkSpec spec;
	Sphere sphere;
	SweModel model;
	PrognosticState u0;

	explicit Setup(const BenchmarkSpec &s, int trunc)
		: spec(s), sphere(s.sphere_config(trunc)), model(sphere, s.model_params()), u0(initial_state(sphere, s))
	{
	}
};


/// Reference at time t: analytic for the gravity wave, otherwise loaded or generated and cached.
PrognosticState obtain_reference(const Setup &s, const RunConfig &c, std::string &name, std::ostream &log)
{
	if (s.spec.name == BenchmarkName::LinearGravityWave)
	{
		name = "analytic";
		return linear_gravity_wave_exact(s.sphere, s.spec, s.spec.horizon_seconds());
	}
	if (!c.reference.empty())
	{
		name = std::filesystem::path(c.reference).filename().string();
		return load_snapshot(c.reference, s.sphere.config());
	}
	const double dt_ref = c.reference_dt(s.spec);
	name = reference_filename(s.spec, c.trunc, dt_ref);
	const auto path = c.out / name;
	if (std::filesystem::exists(path))
	{
		log << "reference: reusing " << path.string() << "\n";
		return load_snapshot(path, s.sphere.config());
	}
	log << "reference: computing " << name << "\n";
	return reference_solution(s.sphere, s.spec, dt_ref, path);
}


int cmd_run(const RunConfig &c, std::ostream &log)
{
	Setup s(c.benchmark_spec(), c.trunc);
	const double dt = c.dts[0];
	const double horizon = s.spec.horizon_seconds();
	const long long n = steps_to_cover(horizon, dt);
	const double t_end = double(n) * dt;
	const bool on_horizon = std::abs(t_end - horizon) <= 1e-9 * horizon;

	std::string ref_name;
	PrognosticState reference;
	if (s.spec.name == BenchmarkName::LinearGravityWave)
	{
		ref_name = "analytic";
		reference = linear_gravity_wave_exact(s.sphere, s.spec, t_end);
	}
	else if (on_horizon)
		reference = obtain_reference(s, c, ref_name, log);

	RexiOptions rexi = c.rexi;
	rexi.workers = c.workers[0];
	const auto ts = parse_stepper_id(c.steppers[0]);
	Stepper stepper(s.model, ts, dt, rexi);
	const auto r = integrate(stepper, s.u0, t_end);

	nlohmann::json report = {
		{"stepper_id", format_stepper_id(ts)},
		{"dt_seconds", dt},
		{"trunc", c.trunc},
		{"benchmark", c.benchmark},
		{"horizon_hours", s.spec.horizon_hours},
		{"steps", r.steps},
		{"end_time_seconds", r.time},
		{"reference", ref_name},
	};
	if (r.diverged)
	{
		report["status"] = "DIVERGED";
		report["diagnostic"] = r.diagnostic;
		write_json(c.out / "error_report.json", report);
		log << "run: DIVERGED after " << r.steps << " steps: " << r.diagnostic << "\n";
		return ExitDivergence;
	}
	report["status"] = "ok";
	if (ref_name.empty())
	{
		report["note"] = "end time differs from the horizon; no reference comparison";
		report["linf_h_error_m"] = nullptr;
	}
	else
	{
		report["linf_h_error_m"] = linf_error(s.sphere, r.state, reference, ErrorField::Height);
		report["linf_vort_error"] = linf_error(s.sphere, r.state, reference, ErrorField::Vorticity);
		report["linf_div_error"] = linf_error(s.sphere, r.state, reference, ErrorField::Divergence);
	}
	write_json(c.out / "error_report.json", report);
	save_snapshot(c.out / snapshot_filename(c), s.sphere.config(), r.state);
	write_json(c.out / "timing.json",
			to_json(stepper.timings(), rexi.workers, uses_rexi(ts) ? rexi.num_poles : 0, 0));
	log << "run: " << r.steps << " steps to t=" << r.time << " s";
	if (report["linf_h_error_m"].is_number())
		log << ", linf_h=" << report["linf_h_error_m"].get<double>() << " m";
	log << "\n";
	return ExitOk;
}


void write_sweep_tables(const std::filesystem::path &dir, const std::vector<SweepRow> &rows)
{
	write_sweep_csv(dir / "sweep.csv", rows);

	std::ostringstream err;
	err << std::setprecision(17) << "stepper_id,dt_seconds,linf_h_error_m,status\n";
	for (const auto &r : rows)
	{
		err << r.stepper_id << ',' << r.dt << ',';
		if (std::isfinite(r.linf_h))
			err << r.linf_h;
		else
			err << "nan";
		err << ',' << to_string(r.status) << '\n';
	}
	write_text(dir / "error_vs_dt.csv", err.str());

	std::vector<const SweepRow *> ok;
	for (const auto &r : rows)
		if (r.status == RowStatus::Ok)
			ok.push_back(&r);
	std::stable_sort(ok.begin(), ok.end(), [](const SweepRow *a, const SweepRow *b)
	{
		return a->stepper_id != b->stepper_id ? a->stepper_id < b->stepper_id : a->linf_h < b->linf_h;
	});
	std::ostringstream wc;
	wc << std::setprecision(17) << "stepper_id,linf_h_error_m,wallclock_s,dt_seconds\n";
	for (const auto *r : ok)
		wc << r->stepper_id << ',' << r->linf_h << ',' << std::setprecision(6) << r->wallclock << std::setprecision(17)
				<< ',' << r->dt << '\n';
	write_text(dir / "wallclock_vs_error.csv", wc.str());
}


int cmd_sweep(const RunConfig &c, std::ostream &log)
{
	Setup s(c.benchmark_spec(), c.trunc);
	std::string ref_name;
	const auto reference = obtain_reference(s, c, ref_name, log);
	SweepOptions opts;
	opts.rexi = c.rexi;
	opts.rexi.workers = c.workers[0];
	const auto rows = run_sweep(c.steppers, c.dts, s.spec, s.model, s.u0, reference, opts);
	write_sweep_tables(c.out, rows);
	std::map<RowStatus, int> counts;
	for (const auto &r : rows)
		++counts[r.status];
	log << "sweep: " << rows.size() << " rows";
	for (const auto &[st, k] : counts)
		log << ", " << to_string(st) << "=" << k;
	log << "\n";
	return ExitOk;
}


int cmd_stiffness(const RunConfig &c, std::ostream &log)
{
	const auto configs = stiffness_sweep_configs(c.benchmark_spec());
	std::ostringstream csv;
	csv << std::setprecision(17) << "phibar_over_g_m,stepper_id,dt_seconds,linf_h_error_m,status,wallclock_s\n";
	std::map<std::pair<std::string, double>, std::vector<double>> series;
	for (const auto &spec : configs)
	{
		Setup s(spec, c.trunc);
		std::string ref_name;
		const auto reference = obtain_reference(s, c, ref_name, log);
		SweepOptions opts;
		opts.rexi = c.rexi;
		opts.rexi.workers = c.workers[0];
		const double h0 = spec.mean_geopotential / spec.gravity;
		for (const auto &r : run_sweep(c.steppers, c.dts, spec, s.model, s.u0, reference, opts))
		{
			csv << h0 << ',' << r.stepper_id << ',' << r.dt << ',';
			if (std::isfinite(r.linf_h))
				csv << r.linf_h;
			else
				csv << "nan";
			csv << ',' << to_string(r.status) << ',' << std::setprecision(6) << r.wallclock << std::setprecision(17)
					<< '\n';
			series[{r.stepper_id, r.dt}].push_back(r.linf_h);
		}
	}
	write_text(c.out / "stiffness.csv", csv.str());
	for (const auto &[key, errs] : series)
	{
		int violations = 0;
		for (std::size_t i = 1; i < errs.size(); ++i)
			if (!(errs[i] >= errs[i - 1]))
				++violations;
		log << "stiffness: " << key.first << " dt=" << key.second << " adjacent decreases=" << violations << "\n";
	}
	return ExitOk;
}


int cmd_timing(const RunConfig &c, std::ostream &log)
{
	Setup s(c.benchmark_spec(), c.trunc);
	const double dt = c.dts[0];
	const auto ts = parse_stepper_id(c.steppers[0]);
	const double t_end = double(steps_to_cover(s.spec.horizon_seconds(), dt)) * dt;
	const int hw = int(std::max(1u, std::thread::hardware_concurrency()));

	nlohmann::json runs = nlohmann::json::array();
	std::vector<std::pair<int, TimingBreakdown>> best;
	std::optional<PrognosticState> first;
	bool identical = true, closure = true;
	for (int k : c.workers)
	{
		RexiOptions rexi = c.rexi;
		rexi.workers = k;
		Stepper stepper(s.model, ts, dt, rexi);
		std::vector<TimingBreakdown> samples;
		for (int e = 0; e < c.repeats; ++e)
		{
			stepper.reset_timings();
			const auto r = integrate(stepper, s.u0, t_end);
			if (r.diverged)
				throw DivergenceError("timing run diverged: " + r.diagnostic);
			samples.push_back(stepper.timings());
			closure = closure && samples.back().closure_holds();
			runs.push_back(to_json(samples.back(), k, uses_rexi(ts) ? rexi.num_poles : 0, e));
			if (!first)
				first = r.state;
			else if (max_abs_diff(*first, r.state) != 0)
				identical = false;
		}
		best.emplace_back(k, min_timings(samples));
	}
	const auto amdahl = amdahl_report(best, hw);
	nlohmann::json rows = nlohmann::json::array();
	for (const auto &row : amdahl.rows)
		rows.push_back({{"K", row.workers}, {"measured_speedup", row.measured_speedup},
				{"projected_speedup", row.projected_speedup}});
	const nlohmann::json j = {
		{"stepper_id", format_stepper_id(ts)},
		{"dt_seconds", dt},
		{"steps", steps_to_cover(s.spec.horizon_seconds(), dt)},
		{"hardware_threads", hw},
		{"runs", runs},
		{"bitwise_identical", identical},
		{"closure_holds", closure},
		{"amdahl", {{"serial_fraction", amdahl.serial_fraction}, {"max_speedup", amdahl.max_speedup}, {"rows", rows}}},
	};
	write_json(c.out / "timing.json", j);
	log << "timing: K=" << joined(c.workers) << ", bitwise identical=" << (identical ? "yes" : "no")
			<< ", closure=" << (closure ? "yes" : "no") << "\n";
	return identical ? ExitOk : ExitSolver;
}


int cmd_coeffs(const RunConfig &c, std::ostream &log)
{
	const auto fn = parse_phi_function(c.phi);
	const auto contour = c.rexi.contour(c.dts[0]);
	const auto coeffs = contour_coeffs(fn, contour);
	const std::string name = "rexi_" + to_string(fn) + "_N" + std::to_string(contour.num_poles) + "_r"
			+ tag(contour.radius) + "_c" + tag(contour.center.real()) + ".csv";
	write_rexi_csv(c.out / name, coeffs);

	const double mu = contour.center.real();
	const double reach = std::sqrt(std::max(0.0, contour.radius * contour.radius - mu * mu));
	const double half = reach * 5 / 6;
	double max_err = 0, sum_beta = 0;
	for (int i = 0; i <= 2000; ++i)
	{
		const Complex z(0, -half + 2 * half * i / 2000);
		max_err = std::max(max_err, std::abs(eval_rational(coeffs, z) - phi_function(fn, z)));
	}
	for (const auto &b : coeffs.betas)
		sum_beta += std::abs(b);
	const auto cancel = cancellation_diagnostic(coeffs);
	write_json(c.out / (name.substr(0, name.size() - 4) + ".json"), {
		{"function", to_string(fn)},
		{"num_poles", contour.num_poles},
		{"radius", contour.radius},
		{"center", mu},
		{"imag_half_width", half},
		{"max_abs_error_on_imag_axis", max_err},
		{"max_abs_beta", cancel.max_abs_beta},
		{"log_max_abs_beta", cancel.log_max_abs_beta},
		{"sum_abs_beta", sum_beta},
	});
	log << "coeffs: " << name << ", max error on i[-" << half << "," << half << "] = " << max_err << "\n";
	return ExitOk;
}


void bind(CLI::App &app, RunConfig &c)
{
	app.fallthrough();
	app.require_subcommand(1);
	app.set_config("--config", "", "key = value file; flags override it");
	app.add_option("--stepper", c.steppers, "stepper id(s), comma separated")->delimiter(',');
	app.add_option("--dt", c.dts, "time step(s) in seconds, comma separated")->delimiter(',');
	app.add_option("--trunc", c.trunc, "triangular truncation T");
	app.add_option("--benchmark", c.benchmark,
			"barotropic_instability | barotropic_instability_no_bump | linear_gravity_wave");
	app.add_option("--horizon-hours", c.horizon_hours, "simulated time; 0 = benchmark default");
	app.add_option("--rexi-p0", c.rexi.p0, "real point of the shifted contour");
	app.add_option("--rexi-p1-imag", c.rexi.p1_imag, "imaginary points +-i p1 of the shifted contour");
	app.add_option("--rexi-n", c.rexi.num_poles, "number of poles");
	app.add_option("--rexi-radius-scaling", c.rexi.radius_scaling,
			"origin circle with radius scaled by the substep instead of the shifted contour");
	app.add_option("--rexi-min-radius", c.rexi.min_radius, "floor of the scaled radius");
	app.add_option("--workers", c.workers, "REXI workers K (timing: list)")->delimiter(',');
	app.add_option("--reference", c.reference, "reference snapshot; empty = generate in --out");
	app.add_option("--dt-ref", c.dt_ref, "reference RK4 step; 0 = 15 s * 42 / T fitted to the horizon");
	app.add_option("--jet-constants", c.jet_constants, "jet and bump constants file");
	app.add_option("--phi", c.phi, "coeffs: psi0 | psi1 | psi2");
	app.add_option("--repeats", c.repeats, "timing: runs per K");
	app.add_option("--out", c.out, "output directory");

	app.add_subcommand("run", "single simulation: error report, snapshot, timing JSON");
	app.add_subcommand("sweep", "stepper x dt grid: error-vs-dt and wallclock-vs-error tables");
	app.add_subcommand("stiffness", "grid over mean depths 2000..18000 m");
	app.add_subcommand("timing", "REXI timing breakdown over worker counts");
	app.add_subcommand("coeffs", "REXI poles and weights with accuracy diagnostics");
}

void parse_into(CLI::App &app, RunConfig &c, const std::vector<std::string> &args)
{
	std::vector<std::string> rev(args.rbegin(), args.rend());
	app.parse(rev);
	c.command = app.get_subcommands().front()->get_name();
}

}	// namespace


BenchmarkSpec RunConfig::benchmark_spec() const
{
	BenchmarkSpec s = default_benchmark(parse_benchmark_name(benchmark));
	if (horizon_hours > 0)
		s.horizon_hours = horizon_hours;
	if (!jet_constants.empty())
		s.jet = load_jet_constants(jet_constants);
	s.validate();
	return s;
}

double RunConfig::reference_dt(const BenchmarkSpec &spec) const
{
	if (dt_ref > 0)
		return dt_ref;
	const double target = 15.0 * 42 / trunc;
	return spec.horizon_seconds() / std::ceil(spec.horizon_seconds() / target);
}

void RunConfig::validate() const
{
	if (std::find(commands.begin(), commands.end(), command) == commands.end())
		throw ParseError("unknown command '" + command + "'");
	if (steppers.empty() || dts.empty() || workers.empty())
		throw ConfigError("--stepper, --dt and --workers need at least one value");
	for (const auto &id : steppers)
		parse_stepper_id(id);
	for (double dt : dts)
		if (!std::isfinite(dt) || dt <= 0)
			throw ConfigError("--dt must be positive and finite");
	for (int k : workers)
		if (k < 1)
			throw ConfigError("--workers must be >= 1");
	if (trunc < 1)
		throw ConfigError("--trunc must be >= 1");
	if (!std::isfinite(horizon_hours) || horizon_hours < 0)
		throw ConfigError("--horizon-hours must be >= 0");
	if (!std::isfinite(dt_ref) || dt_ref < 0)
		throw ConfigError("--dt-ref must be >= 0");
	if (repeats < 1)
		throw ConfigError("--repeats must be >= 1");
	if (out.empty())
		throw ConfigError("--out must not be empty");
	parse_phi_function(phi);
	rexi.validate();
	const auto spec = benchmark_spec();
	if (command == "run" && (steppers.size() != 1 || dts.size() != 1 || workers.size() != 1))
		throw ConfigError("run takes exactly one stepper, dt and worker count");
	if (command == "timing" && (steppers.size() != 1 || dts.size() != 1))
		throw ConfigError("timing takes exactly one stepper and dt");
	if (command == "stiffness" && !reference.empty())
		throw ConfigError("stiffness generates one reference per depth; --reference is not accepted");
	if (command == "stiffness" && spec.name == BenchmarkName::LinearGravityWave)
		throw ConfigError("stiffness runs the barotropic instability cases");
	if (!reference.empty() && !std::filesystem::exists(reference))
		throw ConfigError("reference " + reference + " does not exist");
}

std::string RunConfig::to_ini() const
{
	std::ostringstream os;
	os << std::setprecision(17);
	os << "# " << command << "\n";
	os << "stepper=" << joined(steppers) << "\n";
	os << "dt=" << joined(dts) << "\n";
	os << "trunc=" << trunc << "\n";
	os << "benchmark=" << benchmark << "\n";
	os << "horizon-hours=" << horizon_hours << "\n";
	os << "rexi-p0=" << rexi.p0 << "\n";
	os << "rexi-p1-imag=" << rexi.p1_imag << "\n";
	os << "rexi-n=" << rexi.num_poles << "\n";
	os << "rexi-radius-scaling=" << (rexi.radius_scaling ? "true" : "false") << "\n";
	os << "rexi-min-radius=" << rexi.min_radius << "\n";
	os << "workers=" << joined(workers) << "\n";
	os << "reference=\"" << reference << "\"\n";
	os << "dt-ref=" << dt_ref << "\n";
	os << "jet-constants=\"" << jet_constants << "\"\n";
	os << "phi=" << phi << "\n";
	os << "repeats=" << repeats << "\n";
	os << "out=\"" << out.string() << "\"\n";
	return os.str();
}

std::string snapshot_filename(const RunConfig &c)
{
	const auto spec = c.benchmark_spec();
	return "snapshot_" + c.benchmark + "_T" + std::to_string(c.trunc) + "_" + c.steppers.at(0) + "_dt"
			+ tag(c.dts.at(0)) + "_h" + tag(spec.horizon_hours) + "_phibar"
			+ tag(spec.mean_geopotential / spec.gravity) + ".bin";
}

RunConfig parse_args(const std::vector<std::string> &args)
{
	CLI::App app{"shallow-water REXI experiments", "swe_rexi"};
	RunConfig c;
	bind(app, c);
	parse_into(app, c, args);
	return c;
}

int main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
	CLI::App app{"shallow-water REXI experiments", "swe_rexi"};
	RunConfig c;
	bind(app, c);
	try
	{
		parse_into(app, c, args);
	}
	catch (const CLI::ParseError &e)
	{
		return app.exit(e, out, err) == 0 ? ExitOk : ExitParse;
	}

	try
	{
		c.validate();
		if (c.horizon_hours == 0)
			c.horizon_hours = c.benchmark_spec().horizon_hours;
		if (c.dt_ref == 0 && c.command != "coeffs")
			c.dt_ref = c.reference_dt(c.benchmark_spec());
		std::filesystem::create_directories(c.out);
		write_text(c.out / ("resolved_" + c.command + ".ini"), c.to_ini());

		if (c.command == "run")
			return cmd_run(c, out);
		if (c.command == "sweep")
			return cmd_sweep(c, out);
		if (c.command == "stiffness")
			return cmd_stiffness(c, out);
		if (c.command == "timing")
			return cmd_timing(c, out);
		return cmd_coeffs(c, out);
	}
	catch (const ParseError &e)
	{
		err << "parse error: " << e.what() << "\n";
		return ExitParse;
	}
	catch (const ConfigError &e)
	{
		err << "config error: " << e.what() << "\n";
		return ExitConfig;
	}
	catch (const DivergenceError &e)
	{
		err << "divergence: " << e.what() << "\n";
		return ExitDivergence;
	}
	catch (const SolverError &e)
	{
		err << "solver error: " << e.what() << "\n";
		return ExitSolver;
	}
	catch (const DataError &e)
	{
		err << "data error: " << e.what() << "\n";
		return ExitData;
	}
	catch (const std::filesystem::filesystem_error &e)
	{
		err << "config error: " << e.what() << "\n";
		return ExitConfig;
	}
	catch (const std::exception &e)
	{
		err << "internal error: " << e.what() << "\n";
		return ExitInternal;
	}
}

}	// namespace swe::cli
