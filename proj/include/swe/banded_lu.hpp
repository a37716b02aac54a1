#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace swe {

/**
 * Complex general band matrix with kl sub- and ku super-diagonals, factored
 * in place by LU with partial pivoting (row interchanges stay inside the band).
 *
 * Column-major band storage with room for the fill-in of U:
 *   ldab = 2 kl + ku + 1, A(i, j) = ab[j * ldab + kl + ku + i - j].
 */
class BandedLU
{
public:
	using Complex = std::complex<double>;

	BandedLU() = default;
	BandedLU(int n, int kl, int ku);

	int size() const { return n_; }
	bool factored() const { return factored_; }

	/// Entry of the unfactored matrix, -ku <= i - j <= kl.
	Complex &at(int i, int j);
	Complex at(int i, int j) const;

	/// Returns false if a zero pivot is met.
	bool factor();

	/// max |U_jj| / min |U_jj|, a cheap conditioning indicator.
	double pivot_ratio() const;

	/// Overwrites b (length n) with the solution.
	void solve(Complex *b) const;

	std::size_t bytes() const { return ab_.size() * sizeof(Complex) + ipiv_.size() * sizeof(int); }

private:
	Complex &ref(int i, int j) { return ab_[static_cast<std::size_t>(j) * ldab_ + kv_ + i - j]; }
	const Complex &ref(int i, int j) const { return ab_[static_cast<std::size_t>(j) * ldab_ + kv_ + i - j]; }

	int n_ = 0, kl_ = 0, ku_ = 0, kv_ = 0, ldab_ = 0;
	bool factored_ = false;
	std::vector<Complex> ab_;
	std::vector<int> ipiv_;
};

}	// namespace swe
