#include "swe/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "swe/errors.hpp"

namespace swe {

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

namespace {

template <class T>
void put(std::ofstream &os, T v)
{
	os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <class T>
T get(const std::vector<char> &buf, std::size_t &pos)
{
	T v;
	std::memcpy(&v, buf.data() + pos, sizeof(T));
	pos += sizeof(T);
	return v;
}

std::ofstream open_out(const std::filesystem::path &path, const SphereConfig &cfg)
{
	if (path.has_parent_path())
		std::filesystem::create_directories(path.parent_path());
	std::ofstream os(path, std::ios::binary | std::ios::trunc);
	if (!os)
		throw ConfigError("cannot open " + path.string() + " for writing");
	put<std::int32_t>(os, cfg.trunc);
	put<std::int32_t>(os, cfg.nlat);
	put<std::int32_t>(os, cfg.nlon);
	return os;
}

std::vector<char> slurp(const std::filesystem::path &path, FieldFileHeader &h)
{
	std::ifstream is(path, std::ios::binary);
	if (!is)
		throw ConfigError("cannot open " + path.string());
	std::vector<char> buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
	if (buf.size() < 12)
		throw ParseError(path.string() + ": truncated header");
	std::size_t pos = 0;
	h.trunc = get<std::int32_t>(buf, pos);
	h.nlat = get<std::int32_t>(buf, pos);
	h.nlon = get<std::int32_t>(buf, pos);
	if (h.trunc < 0 || h.nlat < 0 || h.nlon < 0)
		throw ParseError(path.string() + ": invalid header");
	return buf;
}

}	// namespace


void write_spectral_fields(const std::filesystem::path &path, const SphereConfig &cfg,
		const std::vector<SpectralField> &fields)
{
	auto os = open_out(path, cfg);
	for (const auto &f : fields)
	{
		if (f.trunc() != cfg.trunc || !f.is_real())
			throw ConfigError("write_spectral_fields: field does not match header");
		for (int l = 0; l <= cfg.trunc; ++l)
			for (int m = 0; m <= l; ++m)
			{
				put<double>(os, f(l, m).real());
				put<double>(os, f(l, m).imag());
			}
	}
	if (!os)
		throw ConfigError("write failed: " + path.string());
}


std::vector<SpectralField> read_spectral_fields(const std::filesystem::path &path, FieldFileHeader *header)
{
	FieldFileHeader h;
	auto buf = slurp(path, h);
	const std::size_t per_field = SpectralField::real_size(h.trunc) * 16;
	const std::size_t payload = buf.size() - 12;
	if (per_field == 0 || payload % per_field != 0)
		throw ParseError(path.string() + ": size is not a whole number of spectral fields");

	std::vector<SpectralField> out;
	std::size_t pos = 12;
	for (std::size_t n = 0; n < payload / per_field; ++n)
	{
		SpectralField f(h.trunc);
		for (int l = 0; l <= h.trunc; ++l)
			for (int m = 0; m <= l; ++m)
			{
				double re = get<double>(buf, pos);
				double im = get<double>(buf, pos);
				f(l, m) = Complex(re, im);
			}
		out.push_back(std::move(f));
	}
	if (header)
		*header = h;
	return out;
}


void write_grid_fields(const std::filesystem::path &path, const SphereConfig &cfg,
		const std::vector<GridField> &fields)
{
	auto os = open_out(path, cfg);
	for (const auto &g : fields)
	{
		if (g.nlat() != cfg.nlat || g.nlon() != cfg.nlon)
			throw ConfigError("write_grid_fields: field does not match header");
		for (double v : g.data())
			put<double>(os, v);
	}
	if (!os)
		throw ConfigError("write failed: " + path.string());
}


std::vector<GridField> read_grid_fields(const std::filesystem::path &path, FieldFileHeader *header)
{
	FieldFileHeader h;
	auto buf = slurp(path, h);
	const std::size_t per_field = static_cast<std::size_t>(h.nlat) * h.nlon * 8;
	const std::size_t payload = buf.size() - 12;
	if (per_field == 0 || payload % per_field != 0)
		throw ParseError(path.string() + ": size is not a whole number of grid fields");

	std::vector<GridField> out;
	std::size_t pos = 12;
	for (std::size_t n = 0; n < payload / per_field; ++n)
	{
		GridField g(h.nlat, h.nlon);
		for (double &v : g.data())
			v = get<double>(buf, pos);
		out.push_back(std::move(g));
	}
	if (header)
		*header = h;
	return out;
}

}	// namespace swe
