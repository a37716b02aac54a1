#include "swe/benchmarks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "swe/errors.hpp"
#include "swe/field_io.hpp"

namespace swe {

namespace {

constexpr double pi = std::numbers::pi;

/// Longitude mapped to (-pi, pi].
double centered_lon(double lon)
{
	return lon > pi ? lon - 2 * pi : lon;
}

std::string number_tag(double x)
{
	std::ostringstream os;
	os << std::setprecision(10) << x;
	std::string s = os.str();
	std::replace(s.begin(), s.end(), '.', 'p');
	return s;
}

}	// namespace


std::string to_string(BenchmarkName n)
{
	switch (n)
	{
	case BenchmarkName::BarotropicInstability: return "barotropic_instability";
	case BenchmarkName::BarotropicInstabilityNoBump: return "barotropic_instability_no_bump";
	case BenchmarkName::LinearGravityWave: return "linear_gravity_wave";
	}
	return "?";
}

BenchmarkName parse_benchmark_name(const std::string &s)
{
	for (auto n : {BenchmarkName::BarotropicInstability, BenchmarkName::BarotropicInstabilityNoBump,
				 BenchmarkName::LinearGravityWave})
		if (s == to_string(n))
			return n;
	throw ParseError("unknown benchmark '" + s + "'");
}


void JetConstants::validate() const
{
	if (!(u_max > 0) || !(lat0 > -pi / 2) || !(lat1 < pi / 2) || !(lat0 < lat1))
		throw ConfigError("jet: need u_max > 0 and -pi/2 < lat0 < lat1 < pi/2");
	if (!(bump_alpha > 0) || !(bump_beta > 0) || !std::isfinite(bump_height) || std::abs(bump_lat) >= pi / 2)
		throw ConfigError("jet: invalid bump parameters");
}


JetConstants load_jet_constants(const std::filesystem::path &path)
{
	std::ifstream in(path);
	if (!in)
		throw ConfigError("cannot open jet constants file " + path.string());
	boost::property_tree::ptree tree;
	try
	{
		boost::property_tree::read_ini(in, tree);
	}
	catch (const boost::property_tree::ini_parser_error &e)
	{
		throw ParseError("jet constants " + path.string() + ": " + e.message());
	}

	JetConstants c;
	const std::pair<const char *, double *> keys[] = {
		{"u_max", &c.u_max},
		{"lat0", &c.lat0},
		{"lat1", &c.lat1},
		{"bump_height", &c.bump_height},
		{"bump_alpha", &c.bump_alpha},
		{"bump_beta", &c.bump_beta},
		{"bump_lat", &c.bump_lat},
	};
	for (const auto &[key, node] : tree)
	{
		if (!node.empty())
			throw ParseError("jet constants " + path.string() + ": sections are not supported ('" + key + "')");
		auto it = std::find_if(std::begin(keys), std::end(keys), [&](const auto &k) { return key == k.first; });
		if (it == std::end(keys))
			throw ParseError("jet constants " + path.string() + ": unknown key '" + key + "'");
		try
		{
			*it->second = node.get_value<double>();
		}
		catch (const boost::property_tree::ptree_error &)
		{
			throw ParseError("jet constants " + path.string() + ": '" + key + "' is not a number");
		}
	}
	c.validate();
	return c;
}


void write_jet_constants(const std::filesystem::path &path, const JetConstants &c)
{
	std::ofstream out(path);
	if (!out)
		throw ConfigError("cannot write " + path.string());
	out << std::setprecision(17);
	out << "# barotropic instability jet and bump (angles in radians, heights in m)\n";
	out << "u_max=" << c.u_max << "\nlat0=" << c.lat0 << "\nlat1=" << c.lat1 << "\nbump_height=" << c.bump_height
		<< "\nbump_alpha=" << c.bump_alpha << "\nbump_beta=" << c.bump_beta << "\nbump_lat=" << c.bump_lat << "\n";
}


void BenchmarkSpec::validate() const
{
	if (!(mean_geopotential > 0) || !(horizon_hours > 0) || !(radius > 0) || !(omega >= 0) || !(gravity > 0))
		throw ConfigError("benchmark " + to_string(name) + ": horizon and constants must be positive");
	jet.validate();
}

SphereConfig BenchmarkSpec::sphere_config(int trunc) const
{
	return SphereConfig::for_truncation(trunc, radius, omega, gravity);
}

BenchmarkSpec default_benchmark(BenchmarkName name)
{
	BenchmarkSpec s;
	s.name = name;
	if (name == BenchmarkName::LinearGravityWave)
	{
		s.omega = 0;
		s.horizon_hours = 6;
	}
	return s;
}

std::vector<BenchmarkSpec> stiffness_sweep_configs(const BenchmarkSpec &base)
{
	std::vector<BenchmarkSpec> out;
	for (int k = 1; k <= 9; ++k)
	{
		BenchmarkSpec s = base;
		s.mean_geopotential = 2000.0 * k * base.gravity;
		out.push_back(s);
	}
	return out;
}


double jet_wind(const JetConstants &c, double lat)
{
	if (lat <= c.lat0 || lat >= c.lat1)
		return 0;
	const double en = std::exp(-4 / ((c.lat1 - c.lat0) * (c.lat1 - c.lat0)));
	return c.u_max / en * std::exp(1 / ((lat - c.lat0) * (lat - c.lat1)));
}


double balanced_height_anomaly(const BenchmarkSpec &spec, double lat)
{
	const JetConstants &c = spec.jet;
	const double upper = std::min(lat, c.lat1);
	if (upper <= c.lat0)
		return 0;
	auto integrand = [&](double p) {
		const double u = jet_wind(c, p);
		return u * (2 * spec.omega * std::sin(p) + std::tan(p) * u / spec.radius);
	};
	double err = 0, l1 = 0;
	const double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, c.lat0, upper, 20, 1e-13,
			&err, &l1);
	const double floor = c.u_max * (2 * spec.omega + c.u_max / spec.radius) * (c.lat1 - c.lat0);
	if (!std::isfinite(val) || err > 1e-12 * std::max(l1, floor))
		throw ConfigError("balance quadrature did not converge at latitude " + std::to_string(lat));
	return -spec.radius / spec.gravity * val;
}


GridField bump_height_grid(const Sphere &sphere, const JetConstants &c)
{
	GridField h = sphere.make_grid();
	for (int i = 0; i < sphere.nlat(); ++i)
	{
		const double lat = sphere.latitude(i);
		const double shape = std::cos(lat) * std::exp(-std::pow((c.bump_lat - lat) / c.bump_beta, 2));
		for (int j = 0; j < sphere.nlon(); ++j)
			h(i, j) = c.bump_height * shape * std::exp(-std::pow(centered_lon(sphere.longitude(j)) / c.bump_alpha, 2));
	}
	return h;
}


GridField jet_height_grid(const Sphere &sphere, const BenchmarkSpec &spec, bool with_bump)
{
	GridField h = sphere.make_grid();
	for (int i = 0; i < sphere.nlat(); ++i)
	{
		const double hi = balanced_height_anomaly(spec, sphere.latitude(i));
		for (int j = 0; j < sphere.nlon(); ++j)
			h(i, j) = hi;
	}
	if (with_bump)
	{
		const GridField b = bump_height_grid(sphere, spec.jet);
		for (int i = 0; i < sphere.nlat(); ++i)
			for (int j = 0; j < sphere.nlon(); ++j)
				h(i, j) += b(i, j);
	}
	return h;
}


PrognosticState init_barotropic_instability(const Sphere &sphere, const BenchmarkSpec &spec, bool with_bump)
{
	spec.validate();
	GridField u = sphere.make_grid(), v = sphere.make_grid();
	for (int i = 0; i < sphere.nlat(); ++i)
	{
		const double ui = jet_wind(spec.jet, sphere.latitude(i));
		for (int j = 0; j < sphere.nlon(); ++j)
			u(i, j) = ui;
	}
	auto [vort, div] = sphere.vortdiv_from_uv(u, v);

	// geopotential that makes the truncated jet's divergence tendency vanish
	PrognosticState s(sphere.trunc());
	s.vort = std::move(vort);
	s.vort(0, 0) = 0;
	const SweModel model(sphere, spec.model_params());
	s.phi_pert = sphere.inv_laplacian(model.tendency(TermGroup::All, s).div);
	s.phi_pert(0, 0) = 0;

	if (with_bump)
	{
		GridField b = bump_height_grid(sphere, spec.jet);
		for (double &x : b.data())
			x *= spec.gravity;
		SpectralField bump = sphere.analysis(b);
		bump(0, 0) = 0;
		s.phi_pert += bump;
	}
	return s;
}


PrognosticState init_linear_gravity_wave(const Sphere &sphere, const BenchmarkSpec &spec, int l, int m,
		double amplitude_m)
{
	return linear_gravity_wave_exact(sphere, spec, 0, l, m, amplitude_m);
}


PrognosticState linear_gravity_wave_exact(const Sphere &sphere, const BenchmarkSpec &spec, double t, int l, int m,
		double amplitude_m)
{
	if (l < 1 || l > sphere.trunc() || m < 0 || m > l)
		throw ConfigError("gravity wave mode (" + std::to_string(l) + ", " + std::to_string(m) + ") out of range");
	const double A = amplitude_m * spec.gravity;
	const double w = std::sqrt(spec.mean_geopotential * l * (l + 1.0)) / spec.radius;
	PrognosticState s(sphere.trunc());
	s.phi_pert(l, m) = A * std::cos(w * t);
	s.div(l, m) = A * w * std::sin(w * t) / spec.mean_geopotential;
	return s;
}


PrognosticState initial_state(const Sphere &sphere, const BenchmarkSpec &spec)
{
	switch (spec.name)
	{
	case BenchmarkName::BarotropicInstability: return init_barotropic_instability(sphere, spec, true);
	case BenchmarkName::BarotropicInstabilityNoBump: return init_barotropic_instability(sphere, spec, false);
	case BenchmarkName::LinearGravityWave: return init_linear_gravity_wave(sphere, spec);
	}
	throw ConfigError("unknown benchmark");
}


double linf_error(const Sphere &sphere, const PrognosticState &state, const PrognosticState &reference,
		ErrorField field)
{
	if (state.trunc() != sphere.trunc() || reference.trunc() != sphere.trunc())
		throw ConfigError("linf_error: states do not match the sphere's truncation");
	const SpectralField *a = &state.phi_pert, *b = &reference.phi_pert;
	double scale = 1 / sphere.config().gravity;
	if (field == ErrorField::Vorticity)
		a = &state.vort, b = &reference.vort, scale = 1;
	else if (field == ErrorField::Divergence)
		a = &state.div, b = &reference.div, scale = 1;
	SpectralField d = *a;
	d -= *b;
	return sphere.synthesis(d).max_abs() * scale;
}


std::string reference_filename(const BenchmarkSpec &spec, int trunc, double dt_ref)
{
	return "ref_" + to_string(spec.name) + "_T" + std::to_string(trunc) + "_dt" + number_tag(dt_ref) + "_h"
			+ number_tag(spec.horizon_hours) + "_phibar" + number_tag(spec.mean_geopotential / spec.gravity) + ".bin";
}


void save_snapshot(const std::filesystem::path &path, const SphereConfig &cfg, const PrognosticState &u)
{
	if (!u.is_real())
		throw ConfigError("save_snapshot: real-origin state required");
	write_spectral_fields(path, cfg, {u.phi_pert, u.vort, u.div});
}


PrognosticState load_snapshot(const std::filesystem::path &path, const SphereConfig &cfg)
{
	FieldFileHeader hdr;
	auto fields = read_spectral_fields(path, &hdr);
	if (hdr.trunc != cfg.trunc || hdr.nlat != cfg.nlat || hdr.nlon != cfg.nlon)
		throw ConfigError("snapshot " + path.string() + " was written for T" + std::to_string(hdr.trunc)
				+ ", expected T" + std::to_string(cfg.trunc));
	if (fields.size() != 3)
		throw DataError("snapshot " + path.string() + " holds " + std::to_string(fields.size()) + " fields, expected 3");
	return {std::move(fields[0]), std::move(fields[1]), std::move(fields[2])};
}


PrognosticState reference_solution(const Sphere &sphere, const BenchmarkSpec &spec, double dt_ref,
		const std::filesystem::path &path)
{
	spec.validate();
	if (sphere.config().omega != spec.omega || sphere.radius() != spec.radius || sphere.config().gravity != spec.gravity)
		throw ConfigError("reference_solution: sphere constants differ from the benchmark's");
	SweModel model(sphere, spec.model_params());
	Stepper rk4(model, parse_stepper_id("ln_erk4"), dt_ref);
	const auto r = integrate(rk4, initial_state(sphere, spec), spec.horizon_seconds());
	if (r.diverged)
		throw DivergenceError("reference run diverged: " + r.diagnostic);
	if (!path.empty())
		save_snapshot(path, sphere.config(), r.state);
	return r.state;
}


std::string to_string(RowStatus s)
{
	switch (s)
	{
	case RowStatus::Ok: return "ok";
	case RowStatus::Filtered: return "filtered";
	case RowStatus::Diverged: return "DIVERGED";
	case RowStatus::Failed: return "failed";
	}
	return "?";
}


std::vector<SweepRow> run_sweep(const std::vector<std::string> &stepper_ids, const std::vector<double> &dt_grid,
		const BenchmarkSpec &spec, const SweModel &model, const PrognosticState &u0, const PrognosticState &reference,
		const SweepOptions &opts)
{
	std::vector<std::string> ids = stepper_ids;
	std::vector<double> dts = dt_grid;
	std::sort(ids.begin(), ids.end());
	ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
	std::sort(dts.begin(), dts.end());
	dts.erase(std::unique(dts.begin(), dts.end()), dts.end());

	std::vector<SweepRow> rows;
	for (const auto &id : ids)
		for (double dt : dts)
		{
			SweepRow row;
			row.stepper_id = id;
			row.dt = dt;
			row.linf_h = std::numeric_limits<double>::quiet_NaN();
			const auto t0 = std::chrono::steady_clock::now();
			try
			{
				Stepper st(model, parse_stepper_id(id), dt, opts.rexi);
				const auto r = integrate(st, u0, spec.horizon_seconds());
				if (r.diverged)
				{
					row.status = RowStatus::Diverged;
					row.message = r.diagnostic;
				}
				else
				{
					row.linf_h = linf_error(model.sphere(), r.state, reference, ErrorField::Height);
					row.status = row.linf_h > opts.filter_threshold_m ? RowStatus::Filtered : RowStatus::Ok;
				}
			}
			catch (const Error &e)
			{
				row.status = RowStatus::Failed;
				row.message = e.what();
			}
			row.wallclock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
			rows.push_back(std::move(row));
		}
	return rows;
}


void write_sweep_csv(const std::filesystem::path &path, const std::vector<SweepRow> &rows)
{
	std::ofstream out(path, std::ios::trunc);
	if (!out)
		throw ConfigError("cannot write " + path.string());
	out << "stepper_id,dt_seconds,linf_h_error_m,status,wallclock_s\n";
	out << std::setprecision(17);
	for (const auto &r : rows)
	{
		out << r.stepper_id << ',' << r.dt << ',';
		if (std::isfinite(r.linf_h))
			out << r.linf_h;
		else
			out << "nan";
		out << ',' << to_string(r.status) << ',' << std::setprecision(6) << r.wallclock << std::setprecision(17) << '\n';
	}
}

}	// namespace swe
