#pragma once

#include <algorithm>
#include <type_traits>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace swe {

/// Values on the nlat x nlon Gauss-Legendre/equiangular grid, latitude-major.
/// Latitude index 0 is the northernmost Gauss node.
template <class T>
class BasicGridField
{
public:
	using value_type = T;

	BasicGridField() = default;
	BasicGridField(int nlat, int nlon, T value = T{})
		: nlat_(nlat), nlon_(nlon), values_(static_cast<std::size_t>(nlat) * nlon, value)
	{
	}

	int nlat() const { return nlat_; }
	int nlon() const { return nlon_; }
	std::size_t size() const { return values_.size(); }

	T &operator()(int ilat, int ilon) { return values_[static_cast<std::size_t>(ilat) * nlon_ + ilon]; }
	const T &operator()(int ilat, int ilon) const { return values_[static_cast<std::size_t>(ilat) * nlon_ + ilon]; }

	std::span<T> row(int ilat) { return {values_.data() + static_cast<std::size_t>(ilat) * nlon_, static_cast<std::size_t>(nlon_)}; }
	std::span<const T> row(int ilat) const { return {values_.data() + static_cast<std::size_t>(ilat) * nlon_, static_cast<std::size_t>(nlon_)}; }

	std::span<T> data() { return values_; }
	std::span<const T> data() const { return values_; }

	bool same_shape(const BasicGridField &o) const { return nlat_ == o.nlat_ && nlon_ == o.nlon_; }

	bool all_finite() const
	{
		return std::all_of(values_.begin(), values_.end(), [](const T &v) {
			if constexpr (std::is_floating_point_v<T>)
				return std::isfinite(v);
			else
				return std::isfinite(v.real()) && std::isfinite(v.imag());
		});
	}

	double max_abs() const
	{
		double m = 0;
		for (const T &v : values_)
			m = std::max(m, static_cast<double>(std::abs(v)));
		return m;
	}

	BasicGridField &operator+=(const BasicGridField &o)
	{
		for (std::size_t i = 0; i < values_.size(); ++i)
			values_[i] += o.values_[i];
		return *this;
	}

	BasicGridField &operator-=(const BasicGridField &o)
	{
		for (std::size_t i = 0; i < values_.size(); ++i)
			values_[i] -= o.values_[i];
		return *this;
	}

	BasicGridField &operator*=(T s)
	{
		for (T &v : values_)
			v *= s;
		return *this;
	}

private:
	int nlat_ = 0;
	int nlon_ = 0;
	std::vector<T> values_;
};

using GridField = BasicGridField<double>;
using ComplexGridField = BasicGridField<std::complex<double>>;

template <class T>
BasicGridField<T> operator-(BasicGridField<T> a, const BasicGridField<T> &b)
{
	a -= b;
	return a;
}

template <class T>
BasicGridField<T> operator+(BasicGridField<T> a, const BasicGridField<T> &b)
{
	a += b;
	return a;
}

}	// namespace swe
