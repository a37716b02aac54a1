#include "swe/banded_lu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace swe {

BandedLU::BandedLU(int n, int kl, int ku)
	: n_(n), kl_(kl), ku_(ku), kv_(kl + ku), ldab_(2 * kl + ku + 1),
	  ab_(static_cast<std::size_t>(n) * (2 * kl + ku + 1)), ipiv_(n)
{
	if (n < 1 || kl < 0 || ku < 0)
		throw std::invalid_argument("BandedLU: bad dimensions");
}


BandedLU::Complex &BandedLU::at(int i, int j)
{
	if (factored_ || i < 0 || j < 0 || i >= n_ || j >= n_ || i - j > kl_ || j - i > ku_)
		throw std::out_of_range("BandedLU::at outside the band");
	return ref(i, j);
}


BandedLU::Complex BandedLU::at(int i, int j) const
{
	if (i < 0 || j < 0 || i >= n_ || j >= n_ || i - j > kl_ || j - i > kv_)
		return 0;
	return ref(i, j);
}


bool BandedLU::factor()
{
	int ju = 0;
	for (int j = 0; j < n_; ++j)
	{
		const int km = std::min(kl_, n_ - 1 - j);

		int jp = 0;
		double best = std::abs(ref(j, j));
		for (int p = 1; p <= km; ++p)
			if (double v = std::abs(ref(j + p, j)); v > best)
			{
				best = v;
				jp = p;
			}
		ipiv_[j] = j + jp;
		if (best == 0)
			return false;

		ju = std::max(ju, std::min(j + ku_ + jp, n_ - 1));
		if (jp != 0)
			for (int c = j; c <= ju; ++c)
				std::swap(ref(j, c), ref(j + jp, c));

		const Complex inv = 1.0 / ref(j, j);
		for (int p = 1; p <= km; ++p)
			ref(j + p, j) *= inv;

		for (int c = j + 1; c <= ju; ++c)
		{
			const Complex t = ref(j, c);
			if (t == Complex(0))
				continue;
			for (int p = 1; p <= km; ++p)
				ref(j + p, c) -= ref(j + p, j) * t;
		}
	}
	factored_ = true;
	return true;
}


double BandedLU::pivot_ratio() const
{
	double lo = std::numeric_limits<double>::infinity(), hi = 0;
	for (int j = 0; j < n_; ++j)
	{
		const double v = std::abs(ref(j, j));
		lo = std::min(lo, v);
		hi = std::max(hi, v);
	}
	return lo == 0 ? std::numeric_limits<double>::infinity() : hi / lo;
}


void BandedLU::solve(Complex *b) const
{
	if (!factored_)
		throw std::logic_error("BandedLU::solve before factor");

	for (int j = 0; j < n_; ++j)
	{
		if (ipiv_[j] != j)
			std::swap(b[j], b[ipiv_[j]]);
		const int km = std::min(kl_, n_ - 1 - j);
		for (int p = 1; p <= km; ++p)
			b[j + p] -= ref(j + p, j) * b[j];
	}
	for (int j = n_ - 1; j >= 0; --j)
	{
		b[j] /= ref(j, j);
		for (int i = std::max(0, j - kv_); i < j; ++i)
			b[i] -= ref(i, j) * b[j];
	}
}

}	// namespace swe
