#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace swe {

using Complex = std::complex<double>;

/// Functions a rational approximation can target: psi0 = exp, psi1, psi2.
enum class PhiFunction
{
	Psi0 = 0,
	Psi1 = 1,
	Psi2 = 2,
};

std::string to_string(PhiFunction f);
PhiFunction parse_phi_function(const std::string &s);

/// psi_0(z) = e^z, psi_1(z) = (e^z - 1)/z, psi_2(z) = (e^z - 1 - z)/z^2.
/// Uses an 8-term Taylor series for |z| < 1e-2.
Complex phi_function(int k, Complex z);
Complex phi_function(PhiFunction f, Complex z);

/// Circle contour z(theta) = R exp(i theta) + center.
struct ContourSpec
{
	double radius = 0;
	Complex center = 0;
	int num_poles = 0;
	std::optional<double> p0;			///< set when built from points
	std::optional<double> p1_imag;

	void validate() const;
};

/**
 * Circle through the real point p0 > 0 and the imaginary points +-i p1_imag:
 * radius r = (p0^2 + p1^2) / (2 p0), center p0 - r.
 */
ContourSpec shifted_contour_from_points(double p0, double p1_imag, int num_poles = 128);

/// Circle contour centered at the origin.
ContourSpec origin_circle(double radius, int num_poles);

/// Radius scaled linearly with the time step, floored at min_radius.
double scale_radius_with_dt(double dt, double base_radius = 30.0, double base_dt = 480.0, double min_radius = 5.0);


/**
 * Poles and weights of f(x) ~ sum_n beta_n / (x + alpha_n), from the
 * trapezoidal rule on a circle contour:
 *
 *   theta_n = 2 pi n / N, n = 1..N
 *   alpha_n = -(R e^{i theta_n} + mu)
 *   beta_n  = -(1/N) R e^{i theta_n} f(R e^{i theta_n} + mu)
 */
struct RexiCoefficients
{
	std::vector<Complex> alphas;
	std::vector<Complex> betas;
	PhiFunction function = PhiFunction::Psi0;
	ContourSpec contour;

	std::size_t size() const { return alphas.size(); }
	void validate() const;
};

RexiCoefficients circle_contour_coeffs(PhiFunction fn, double radius, Complex center, int num_poles,
		bool extended_precision = false);
RexiCoefficients contour_coeffs(PhiFunction fn, const ContourSpec &contour, bool extended_precision = false);

/// Partial-fraction sum, accumulated in index order. Throws on a pole collision.
Complex eval_rational(const RexiCoefficients &coeffs, Complex x);

struct CancellationReport
{
	double max_abs_beta = 0;
	double log_max_abs_beta = 0;
};

/// Builds the origin-centered exp contour of radius R and reports max_n |beta_n|.
CancellationReport cancellation_diagnostic(double radius, int num_poles, bool extended_precision = false);
CancellationReport cancellation_diagnostic(const RexiCoefficients &coeffs);

/// CSV with '#'-prefixed key=value header lines, then rows re_alpha,im_alpha,re_beta,im_beta.
void write_rexi_csv(const std::filesystem::path &path, const RexiCoefficients &coeffs);
RexiCoefficients read_rexi_csv(const std::filesystem::path &path);

}	// namespace swe
