#include "swe/spectral_field.hpp"

#include <algorithm>
#include <cmath>

#include "swe/errors.hpp"

namespace swe {

SpectralField::SpectralField(int trunc, ValueKind kind)
	: trunc_(trunc), kind_(kind),
	  coeffs_(kind == ValueKind::Real ? real_size(trunc) : complex_size(trunc))
{
	if (trunc < 0)
		throw ConfigError("SpectralField: negative truncation");
}


std::size_t SpectralField::block_offset(int m) const
{
	auto positive = [this](int mm) {
		// sum_{k<mm} (T+1-k)
		return static_cast<std::size_t>(mm) * (trunc_ + 1) - static_cast<std::size_t>(mm) * (mm - 1) / 2;
	};
	if (m >= 0)
		return positive(m);
	return real_size(trunc_) + positive(-m) - static_cast<std::size_t>(trunc_ + 1);
}


Complex SpectralField::coeff(int l, int m) const
{
	if (m < 0 && kind_ == ValueKind::Real)
		return std::conj(coeffs_[index(l, -m)]);
	return coeffs_[index(l, m)];
}


std::span<Complex> SpectralField::block(int m)
{
	return {coeffs_.data() + block_offset(m), static_cast<std::size_t>(trunc_ + 1 - std::abs(m))};
}


std::span<const Complex> SpectralField::block(int m) const
{
	return {coeffs_.data() + block_offset(m), static_cast<std::size_t>(trunc_ + 1 - std::abs(m))};
}


void SpectralField::set_zero()
{
	std::fill(coeffs_.begin(), coeffs_.end(), Complex{});
}


bool SpectralField::all_finite() const
{
	return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex &c) {
		return std::isfinite(c.real()) && std::isfinite(c.imag());
	});
}


double SpectralField::max_abs() const
{
	double m = 0;
	for (const Complex &c : coeffs_)
		m = std::max(m, std::abs(c));
	return m;
}


SpectralField SpectralField::to_complex() const
{
	if (kind_ == ValueKind::Complex)
		return *this;

	SpectralField out(trunc_, ValueKind::Complex);
	std::copy(coeffs_.begin(), coeffs_.end(), out.coeffs_.begin());
	for (int m = 1; m <= trunc_; ++m)
	{
		auto src = block(m);
		auto dst = out.block(-m);
		for (std::size_t i = 0; i < src.size(); ++i)
			dst[i] = std::conj(src[i]);
	}
	return out;
}


SpectralField SpectralField::real_part() const
{
	if (kind_ == ValueKind::Real)
		return *this;

	SpectralField out(trunc_, ValueKind::Real);
	for (int m = 0; m <= trunc_; ++m)
	{
		auto pos = block(m);
		auto dst = out.block(m);
		if (m == 0)
		{
			for (std::size_t i = 0; i < pos.size(); ++i)
				dst[i] = pos[i].real();
			continue;
		}
		auto neg = block(-m);
		for (std::size_t i = 0; i < pos.size(); ++i)
			dst[i] = 0.5 * (pos[i] + std::conj(neg[i]));
	}
	return out;
}


SpectralField SpectralField::imag_part() const
{
	SpectralField out(trunc_, ValueKind::Real);
	if (kind_ == ValueKind::Real)
		return out;

	const Complex half_over_i(0, -0.5);
	for (int m = 0; m <= trunc_; ++m)
	{
		auto pos = block(m);
		auto dst = out.block(m);
		if (m == 0)
		{
			for (std::size_t i = 0; i < pos.size(); ++i)
				dst[i] = pos[i].imag();
			continue;
		}
		auto neg = block(-m);
		for (std::size_t i = 0; i < pos.size(); ++i)
			dst[i] = half_over_i * (pos[i] - std::conj(neg[i]));
	}
	return out;
}


void SpectralField::check_compatible(const SpectralField &o) const
{
	if (o.trunc_ != trunc_ || o.kind_ != kind_)
		throw ConfigError("SpectralField: truncation or value kind mismatch");
}


SpectralField &SpectralField::operator+=(const SpectralField &o)
{
	check_compatible(o);
	for (std::size_t i = 0; i < coeffs_.size(); ++i)
		coeffs_[i] += o.coeffs_[i];
	return *this;
}


SpectralField &SpectralField::operator-=(const SpectralField &o)
{
	check_compatible(o);
	for (std::size_t i = 0; i < coeffs_.size(); ++i)
		coeffs_[i] -= o.coeffs_[i];
	return *this;
}


SpectralField &SpectralField::operator*=(double s)
{
	for (Complex &c : coeffs_)
		c *= s;
	return *this;
}


SpectralField &SpectralField::operator*=(Complex s)
{
	if (kind_ == ValueKind::Real && s.imag() != 0)
		throw ConfigError("SpectralField: complex scaling of a real-origin field");
	for (Complex &c : coeffs_)
		c *= s;
	return *this;
}


void SpectralField::axpy(Complex s, const SpectralField &x)
{
	check_compatible(x);
	if (kind_ == ValueKind::Real && s.imag() != 0)
		throw ConfigError("SpectralField: complex axpy into a real-origin field");
	for (std::size_t i = 0; i < coeffs_.size(); ++i)
		coeffs_[i] += s * x.coeffs_[i];
}


void SpectralField::axpy(double s, const SpectralField &x)
{
	check_compatible(x);
	for (std::size_t i = 0; i < coeffs_.size(); ++i)
		coeffs_[i] += s * x.coeffs_[i];
}


SpectralField operator+(SpectralField a, const SpectralField &b)
{
	a += b;
	return a;
}


SpectralField operator-(SpectralField a, const SpectralField &b)
{
	a -= b;
	return a;
}


SpectralField operator*(double s, SpectralField a)
{
	a *= s;
	return a;
}


SpectralField operator*(Complex s, SpectralField a)
{
	a *= s;
	return a;
}


double max_abs_diff(const SpectralField &a, const SpectralField &b)
{
	if (a.trunc() != b.trunc() || a.kind() != b.kind())
		throw ConfigError("max_abs_diff: truncation or value kind mismatch");
	double m = 0;
	auto da = a.data();
	auto db = b.data();
	for (std::size_t i = 0; i < da.size(); ++i)
		m = std::max(m, std::abs(da[i] - db[i]));
	return m;
}

}	// namespace swe
