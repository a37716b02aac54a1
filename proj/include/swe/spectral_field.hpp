#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace swe {

using Complex = std::complex<double>;

/// Whether a spectral field represents a real or a complex physical field.
enum class ValueKind
{
	Real,		///< only m >= 0 stored, f(l,-m) = conj(f(l,m)) implied
	Complex,	///< all -l <= m <= l stored independently
};

/**
 * Spherical harmonic coefficients under triangular truncation T.
 *
 * Basis: Y_l^m(mu, lambda) = Pbar_l^|m|(mu) exp(i m lambda), orthonormal on the
 * unit sphere (integral of |Y|^2 over the sphere equals 1), no Condon-Shortley
 * phase. Hence the (0,0) coefficient of a constant field c is c*sqrt(4 pi).
 *
 * Storage is m-major: for each m the degrees l = |m|..T are contiguous. Real
 * fields hold the blocks m = 0..T, complex fields additionally the blocks
 * m = -1..-T after them.
 */
class SpectralField
{
public:
	SpectralField() = default;
	explicit SpectralField(int trunc, ValueKind kind = ValueKind::Real);

	int trunc() const { return trunc_; }
	ValueKind kind() const { return kind_; }
	bool is_real() const { return kind_ == ValueKind::Real; }

	std::size_t size() const { return coeffs_.size(); }

	/// Offset of the first coefficient (l = |m|) of the block for order m.
	std::size_t block_offset(int m) const;
	std::size_t index(int l, int m) const { return block_offset(m) + static_cast<std::size_t>(l - (m < 0 ? -m : m)); }

	Complex &operator()(int l, int m) { return coeffs_[index(l, m)]; }
	const Complex &operator()(int l, int m) const { return coeffs_[index(l, m)]; }

	/// Coefficient for any m; for real fields negative m is derived by conjugation.
	Complex coeff(int l, int m) const;

	/// Coefficients l = |m|..T for order m.
	std::span<Complex> block(int m);
	std::span<const Complex> block(int m) const;

	std::span<Complex> data() { return coeffs_; }
	std::span<const Complex> data() const { return coeffs_; }

	int min_m() const { return kind_ == ValueKind::Real ? 0 : -trunc_; }

	void set_zero();
	bool all_finite() const;
	double max_abs() const;

	/// Same field as complex-origin data (negative m filled by conjugation).
	SpectralField to_complex() const;

	/// Real part of the physical field, as a real-origin field.
	SpectralField real_part() const;

	/// Imaginary part of the physical field, as a real-origin field.
	SpectralField imag_part() const;

	SpectralField &operator+=(const SpectralField &o);
	SpectralField &operator-=(const SpectralField &o);
	SpectralField &operator*=(double s);
	SpectralField &operator*=(Complex s);

	/// this += s * x
	void axpy(Complex s, const SpectralField &x);
	void axpy(double s, const SpectralField &x);

	static std::size_t real_size(int trunc) { return static_cast<std::size_t>(trunc + 1) * (trunc + 2) / 2; }
	static std::size_t complex_size(int trunc) { return static_cast<std::size_t>(trunc + 1) * (trunc + 1); }

private:
	void check_compatible(const SpectralField &o) const;

	int trunc_ = 0;
	ValueKind kind_ = ValueKind::Real;
	std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField &b);
SpectralField operator-(SpectralField a, const SpectralField &b);
SpectralField operator*(double s, SpectralField a);
SpectralField operator*(Complex s, SpectralField a);

/// max |a - b| over coefficients (same kind and truncation required)
double max_abs_diff(const SpectralField &a, const SpectralField &b);

}	// namespace swe
