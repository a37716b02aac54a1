#pragma once

#include <filesystem>
#include <vector>

#include "swe/grid_field.hpp"
#include "swe/spectral_field.hpp"
#include "swe/sphere_config.hpp"

namespace swe {

/**
 * Binary field dump.
 *
 * Layout (all little-endian):
 *   int32 trunc, int32 nlat, int32 nlon
 *   then one or more fields, back to back:
 *     spectral: (T+1)(T+2)/2 pairs of float64 (re, im), row-major over (l, m), 0 <= m <= l
 *     grid:     nlat*nlon float64, row-major over (lat, lon), northernmost latitude first
 *
 * The number of fields follows from the file size.
 */
struct FieldFileHeader
{
	int trunc = 0;
	int nlat = 0;
	int nlon = 0;
};

void write_spectral_fields(const std::filesystem::path &path, const SphereConfig &cfg,
		const std::vector<SpectralField> &fields);
std::vector<SpectralField> read_spectral_fields(const std::filesystem::path &path, FieldFileHeader *header = nullptr);

void write_grid_fields(const std::filesystem::path &path, const SphereConfig &cfg,
		const std::vector<GridField> &fields);
std::vector<GridField> read_grid_fields(const std::filesystem::path &path, FieldFileHeader *header = nullptr);

}	// namespace swe
