#include "swe/rexi_coefficients.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include "swe/errors.hpp"

namespace swe {

std::string to_string(PhiFunction f)
{
	switch (f)
	{
	case PhiFunction::Psi0: return "psi0";
	case PhiFunction::Psi1: return "psi1";
	case PhiFunction::Psi2: return "psi2";
	}
	return "?";
}


PhiFunction parse_phi_function(const std::string &s)
{
	if (s == "psi0" || s == "exp")
		return PhiFunction::Psi0;
	if (s == "psi1")
		return PhiFunction::Psi1;
	if (s == "psi2")
		return PhiFunction::Psi2;
	throw ParseError("unknown function id '" + s + "'");
}


namespace {

template <class T>
std::complex<T> expm1_complex(std::complex<T> z)
{
	using std::cos, std::exp, std::expm1, std::sin;
	const T x = z.real(), y = z.imag();
	const T s = sin(y / 2);
	return {expm1(x) * cos(y) - 2 * s * s, exp(x) * sin(y)};
}

template <class T>
std::complex<T> phi_impl(int k, std::complex<T> z)
{
	if (k == 0)
		return std::exp(z);

	if (std::abs(z) < T(1e-2))
	{
		// psi_k(z) = sum_j z^j / (j+k)!
		T fact = 1;
		for (int i = 2; i <= k; ++i)
			fact *= i;
		std::complex<T> term = T(1) / fact, sum = 0;
		for (int j = 0; j < 8; ++j)
		{
			sum += term;
			term *= z / T(j + k + 1);
		}
		return sum;
	}

	const std::complex<T> em1 = expm1_complex(z);
	if (k == 1)
		return em1 / z;
	if (k == 2)
		return (em1 - z) / (z * z);
	throw ConfigError("phi_function: only psi0, psi1, psi2 are supported");
}

}	// namespace


Complex phi_function(int k, Complex z)
{
	if (k < 0 || k > 2)
		throw ConfigError("phi_function: only psi0, psi1, psi2 are supported");
	return phi_impl<double>(k, z);
}


Complex phi_function(PhiFunction f, Complex z)
{
	return phi_function(static_cast<int>(f), z);
}


void ContourSpec::validate() const
{
	if (!(radius > 0) || !std::isfinite(radius))
		throw ConfigError("contour radius must be positive");
	if (num_poles < 1)
		throw ConfigError("contour needs at least one pole");
	if (!std::isfinite(center.real()) || !std::isfinite(center.imag()))
		throw ConfigError("contour center must be finite");
}


ContourSpec shifted_contour_from_points(double p0, double p1_imag, int num_poles)
{
	if (!(p0 >= 0))
		throw ConfigError("shifted contour: p0 must be >= 0");
	if (p0 == 0)
		throw ConfigError("shifted contour: p0 = 0 gives an infinite radius");
	if (!(p1_imag > 0))
		throw ConfigError("shifted contour: p1_imag must be > 0");

	ContourSpec c;
	c.radius = (p0 * p0 + p1_imag * p1_imag) / (2 * p0);
	c.center = p0 - c.radius;
	c.num_poles = num_poles;
	c.p0 = p0;
	c.p1_imag = p1_imag;
	c.validate();
	return c;
}


ContourSpec origin_circle(double radius, int num_poles)
{
	ContourSpec c;
	c.radius = radius;
	c.center = 0;
	c.num_poles = num_poles;
	c.validate();
	return c;
}


double scale_radius_with_dt(double dt, double base_radius, double base_dt, double min_radius)
{
	if (!(dt > 0))
		throw ConfigError("scale_radius_with_dt: dt must be positive");
	return std::max(min_radius, base_radius * dt / base_dt);
}


void RexiCoefficients::validate() const
{
	if (alphas.empty() || alphas.size() != betas.size())
		throw ConfigError("RexiCoefficients: need N >= 1 matching poles and weights");
	for (std::size_t n = 0; n < alphas.size(); ++n)
		if (!std::isfinite(std::abs(alphas[n])) || !std::isfinite(std::abs(betas[n])))
			throw ConfigError("RexiCoefficients: non-finite coefficient at index " + std::to_string(n));
}


RexiCoefficients circle_contour_coeffs(PhiFunction fn, double radius, Complex center, int num_poles,
		bool extended_precision)
{
	ContourSpec c;
	c.radius = radius;
	c.center = center;
	c.num_poles = num_poles;
	return contour_coeffs(fn, c, extended_precision);
}


RexiCoefficients contour_coeffs(PhiFunction fn, const ContourSpec &contour, bool extended_precision)
{
	contour.validate();
	const int N = contour.num_poles;

	RexiCoefficients out;
	out.function = fn;
	out.contour = contour;
	out.alphas.resize(N);
	out.betas.resize(N);

	for (int n = 1; n <= N; ++n)
	{
		const double theta = 2 * std::numbers::pi * n / N;
		Complex beta;
		if (extended_precision)
		{
			using LC = std::complex<long double>;
			const long double th = 2 * std::numbers::pi_v<long double> * n / N;
			const LC r = std::polar<long double>(contour.radius, th);
			const LC z = r + LC(contour.center.real(), contour.center.imag());
			const LC b = -r * phi_impl<long double>(static_cast<int>(fn), z) / static_cast<long double>(N);
			beta = Complex(static_cast<double>(b.real()), static_cast<double>(b.imag()));
		}
		else
		{
			const Complex r = std::polar(contour.radius, theta);
			beta = -r * phi_function(fn, r + contour.center) / static_cast<double>(N);
		}
		const Complex node = std::polar(contour.radius, theta) + contour.center;
		out.alphas[n - 1] = -node;
		out.betas[n - 1] = beta;

		if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag()))
		{
			std::ostringstream os;
			os << "contour misconfiguration: " << to_string(fn) << " overflows at node n=" << n
				<< " z=" << node.real() << (node.imag() < 0 ? "" : "+") << node.imag() << "i";
			throw ConfigError(os.str());
		}
	}
	return out;
}


Complex eval_rational(const RexiCoefficients &coeffs, Complex x)
{
	Complex sum = 0;
	for (std::size_t n = 0; n < coeffs.alphas.size(); ++n)
	{
		const Complex d = x + coeffs.alphas[n];
		if (d == Complex(0))
			throw SolverError("eval_rational: x coincides with pole " + std::to_string(n));
		sum += coeffs.betas[n] / d;
	}
	return sum;
}


CancellationReport cancellation_diagnostic(const RexiCoefficients &coeffs)
{
	CancellationReport r;
	for (const Complex &b : coeffs.betas)
		r.max_abs_beta = std::max(r.max_abs_beta, std::abs(b));
	r.log_max_abs_beta = std::log(r.max_abs_beta);
	return r;
}


CancellationReport cancellation_diagnostic(double radius, int num_poles, bool extended_precision)
{
	return cancellation_diagnostic(circle_contour_coeffs(PhiFunction::Psi0, radius, 0.0, num_poles, extended_precision));
}


void write_rexi_csv(const std::filesystem::path &path, const RexiCoefficients &coeffs)
{
	coeffs.validate();
	if (path.has_parent_path())
		std::filesystem::create_directories(path.parent_path());
	std::ofstream os(path, std::ios::trunc);
	if (!os)
		throw ConfigError("cannot open " + path.string() + " for writing");

	os << std::setprecision(17);
	os << "# function_id=" << to_string(coeffs.function) << "\n";
	os << "# radius=" << coeffs.contour.radius << "\n";
	os << "# center_re=" << coeffs.contour.center.real() << "\n";
	os << "# center_im=" << coeffs.contour.center.imag() << "\n";
	os << "# num_poles=" << coeffs.contour.num_poles << "\n";
	if (coeffs.contour.p0)
		os << "# p0=" << *coeffs.contour.p0 << "\n";
	if (coeffs.contour.p1_imag)
		os << "# p1_imag=" << *coeffs.contour.p1_imag << "\n";
	os << "re_alpha,im_alpha,re_beta,im_beta\n";
	for (std::size_t n = 0; n < coeffs.size(); ++n)
		os << coeffs.alphas[n].real() << "," << coeffs.alphas[n].imag() << ","
			<< coeffs.betas[n].real() << "," << coeffs.betas[n].imag() << "\n";
}


RexiCoefficients read_rexi_csv(const std::filesystem::path &path)
{
	std::ifstream is(path);
	if (!is)
		throw ConfigError("cannot open " + path.string());

	std::map<std::string, std::string> header;
	RexiCoefficients out;
	std::string line;
	bool saw_columns = false;
	int lineno = 0;
	while (std::getline(is, line))
	{
		++lineno;
		if (line.empty())
			continue;
		if (line[0] == '#')
		{
			auto body = line.substr(1);
			auto eq = body.find('=');
			if (eq == std::string::npos)
				continue;
			auto trim = [](std::string s) {
				auto b = s.find_first_not_of(" \t");
				auto e = s.find_last_not_of(" \t\r");
				return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
			};
			header[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
			continue;
		}
		if (!saw_columns)
		{
			if (line.rfind("re_alpha", 0) != 0)
				throw ParseError(path.string() + ": missing column header");
			saw_columns = true;
			continue;
		}
		std::istringstream ls(line);
		double v[4];
		char comma;
		if (!(ls >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3]))
			throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 4 numbers");
		out.alphas.emplace_back(v[0], v[1]);
		out.betas.emplace_back(v[2], v[3]);
	}

	auto need = [&](const std::string &k) {
		auto it = header.find(k);
		if (it == header.end())
			throw ParseError(path.string() + ": missing header key " + k);
		return it->second;
	};
	out.function = parse_phi_function(need("function_id"));
	out.contour.radius = std::stod(need("radius"));
	out.contour.center = Complex(std::stod(need("center_re")), std::stod(need("center_im")));
	out.contour.num_poles = std::stoi(need("num_poles"));
	if (header.count("p0"))
		out.contour.p0 = std::stod(header["p0"]);
	if (header.count("p1_imag"))
		out.contour.p1_imag = std::stod(header["p1_imag"]);
	if (static_cast<int>(out.size()) != out.contour.num_poles)
		throw ParseError(path.string() + ": row count does not match num_poles");
	out.validate();
	return out;
}

}	// namespace swe
