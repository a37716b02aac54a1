#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "swe/benchmarks.hpp"
#include "swe/time_integrators.hpp"

namespace swe::cli {

enum ExitCode : int
{
	ExitOk = 0,
	ExitInternal = 1,
	ExitParse = 2,
	ExitConfig = 3,
	ExitDivergence = 4,
	ExitSolver = 5,
	ExitData = 6,
};

/// Fully resolved settings of one invocation.
struct RunConfig
{
	std::string command;
	std::vector<std::string> steppers{"lg_rexi_lc_n_erk_ver1"};
	std::vector<double> dts{300};
	int trunc = 42;
	std::string benchmark = "barotropic_instability";
	double horizon_hours = 0;			///< 0 selects the benchmark default
	RexiOptions rexi;
	std::vector<int> workers{1};
	std::string reference;				///< empty: generated (and cached) in the output directory
	double dt_ref = 0;					///< 0 selects 15 s scaled by 42 / T, fitted to the horizon
	std::string jet_constants;			///< optional key=value file
	std::string phi = "psi0";
	int repeats = 3;
	std::filesystem::path out = "swe_out";

	/// Throws ParseError or ConfigError; called before any compute.
	void validate() const;

	BenchmarkSpec benchmark_spec() const;
	double reference_dt(const BenchmarkSpec &spec) const;

	/// key = value lines accepted back by --config.
	std::string to_ini() const;
};

/// Parses args (without the program name) into a config; throws CLI::Error or swe::Error.
RunConfig parse_args(const std::vector<std::string> &args);

/// Full command-line entry point; returns the process exit code.
int main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Content-describing snapshot name of a single run.
std::string snapshot_filename(const RunConfig &cfg);

}	// namespace swe::cli
