#pragma once

#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "swe/model.hpp"
#include "swe/sphere.hpp"
#include "swe/time_integrators.hpp"

namespace swe {

enum class BenchmarkName
{
	BarotropicInstability,
	BarotropicInstabilityNoBump,
	LinearGravityWave,
};

std::string to_string(BenchmarkName n);
BenchmarkName parse_benchmark_name(const std::string &s);


/// Jet and bump of the barotropic instability test (Galewsky et al. 2004).
struct JetConstants
{
	double u_max = 80;								///< m/s
	double lat0 = std::numbers::pi / 7;				///< southern jet edge
	double lat1 = std::numbers::pi / 2 - std::numbers::pi / 7;
	double bump_height = 120;						///< m
	double bump_alpha = 1.0 / 3;					///< longitudinal width
	double bump_beta = 1.0 / 15;					///< latitudinal width
	double bump_lat = std::numbers::pi / 4;

	void validate() const;
};

/// Reads key=value lines ('#' comments); unknown keys are an error, missing keys keep defaults.
JetConstants load_jet_constants(const std::filesystem::path &path);
void write_jet_constants(const std::filesystem::path &path, const JetConstants &c);


struct BenchmarkSpec
{
	BenchmarkName name = BenchmarkName::BarotropicInstability;
	double mean_geopotential = 1e4 * earth::gravity;	///< Phi bar
	double horizon_hours = 24;
	double radius = earth::radius;
	double omega = earth::omega;
	double gravity = earth::gravity;
	JetConstants jet;

	void validate() const;
	SphereConfig sphere_config(int trunc) const;
	ModelParams model_params() const { return {mean_geopotential}; }
	double horizon_seconds() const { return horizon_hours * 3600; }
};

/// Defaults per benchmark; the gravity-wave case runs without rotation.
BenchmarkSpec default_benchmark(BenchmarkName name);

/// Nine copies of base with Phi bar / g = 2000, 4000, ..., 18000 m.
std::vector<BenchmarkSpec> stiffness_sweep_configs(const BenchmarkSpec &base = {});


/// Zonal jet speed at latitude lat (radians).
double jet_wind(const JetConstants &c, double lat);

/**
 * Height anomaly of the balanced jet, -(a/g) int_{-pi/2}^{lat} u (f + u tan / a),
 * by adaptive Gauss-Kronrod quadrature. Throws ConfigError if the quadrature
 * does not reach its tolerance.
 */
double balanced_height_anomaly(const BenchmarkSpec &spec, double lat);

/// Height anomaly on the grid (m), plus the Gaussian bump when requested.
GridField jet_height_grid(const Sphere &sphere, const BenchmarkSpec &spec, bool with_bump);

/// Gaussian bump alone on the grid (m).
GridField bump_height_grid(const Sphere &sphere, const JetConstants &c);

/**
 * Balanced jet: vorticity from the zonal wind, divergence zero, and the
 * geopotential perturbation (zero mean) that cancels the divergence tendency
 * of the truncated jet, so the discrete state is steady. It converges to the
 * quadrature height of balanced_height_anomaly as T grows. The bump is added
 * to the geopotential.
 */
PrognosticState init_barotropic_instability(const Sphere &sphere, const BenchmarkSpec &spec, bool with_bump);

/// Standing gravity wave in one (l, m) mode: Phi' = amplitude * g at that coefficient, at rest.
PrognosticState init_linear_gravity_wave(const Sphere &sphere, const BenchmarkSpec &spec, int l = 4, int m = 2,
		double amplitude_m = 1e-3);

/// Exact solution of the gravity-wave system for the above initial state.
PrognosticState linear_gravity_wave_exact(const Sphere &sphere, const BenchmarkSpec &spec, double t, int l = 4,
		int m = 2, double amplitude_m = 1e-3);

PrognosticState initial_state(const Sphere &sphere, const BenchmarkSpec &spec);


enum class ErrorField
{
	Height,		///< Phi' / g, m
	Vorticity,
	Divergence,
};

/// Max over grid points of |field - reference|.
double linf_error(const Sphere &sphere, const PrognosticState &state, const PrognosticState &reference,
		ErrorField field = ErrorField::Height);


/// Content-describing name for a reference snapshot.
std::string reference_filename(const BenchmarkSpec &spec, int trunc, double dt_ref);

/**
 * RK4 ("ln_erk4") run of the full system to the horizon; the final
 * (Phi', zeta, delta) is written to path in the binary field format.
 * Throws DivergenceError if the run blows up.
 */
PrognosticState reference_solution(const Sphere &sphere, const BenchmarkSpec &spec, double dt_ref,
		const std::filesystem::path &path);

PrognosticState load_snapshot(const std::filesystem::path &path, const SphereConfig &cfg);
void save_snapshot(const std::filesystem::path &path, const SphereConfig &cfg, const PrognosticState &u);


enum class RowStatus
{
	Ok,
	Filtered,	///< error above the filter threshold
	Diverged,
	Failed,		///< configuration or solver error
};

std::string to_string(RowStatus s);

struct SweepRow
{
	std::string stepper_id;
	double dt = 0;
	double linf_h = 0;			///< NaN unless the run completed
	RowStatus status = RowStatus::Ok;
	double wallclock = 0;
	std::string message;
};

struct SweepOptions
{
	RexiOptions rexi;
	double filter_threshold_m = 100;
};

/// One row per (id, dt), sorted by (id, dt). Failing rows do not stop the sweep.
std::vector<SweepRow> run_sweep(const std::vector<std::string> &stepper_ids, const std::vector<double> &dt_grid,
		const BenchmarkSpec &spec, const SweModel &model, const PrognosticState &u0, const PrognosticState &reference,
		const SweepOptions &opts = {});

/// stepper_id,dt_seconds,linf_h_error_m,status,wallclock_s
void write_sweep_csv(const std::filesystem::path &path, const std::vector<SweepRow> &rows);

}	// namespace swe
