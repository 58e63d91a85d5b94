#include "crapper/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "crapper/error.hpp"

namespace crapper {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

void require_same_size(const SpectralField& a, const SpectralField& b) {
  if (a.size() != b.size()) {
    std::ostringstream os;
    os << "grid sizes " << a.size() << " and " << b.size();
    throw Error(ErrorKind::GridMismatch, os.str());
  }
}

Parity sum_parity(Parity a, Parity b) { return a == b ? a : Parity::None; }

// Signed mode number of FFT slot m.
inline int mode_of(int m, int n) { return m < n / 2 ? m : m - n; }

}  // namespace

const char* to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::None: return "none";
  }
  return "none";
}

double grid_point(int j, int n) { return -kPi + 2.0 * kPi * j / n; }

std::vector<double> grid(int n) {
  std::vector<double> a(n);
  for (int j = 0; j < n; ++j) a[j] = grid_point(j, n);
  return a;
}

std::vector<cdouble> forward_coeffs(const std::vector<double>& samples) {
  const int n = static_cast<int>(samples.size());
  std::vector<cdouble> in(samples.begin(), samples.end());
  std::vector<cdouble> out;
  fft_engine().fwd(out, in);
  // Grid starts at -pi, so each mode picks up (-1)^k.
  for (int m = 0; m < n; ++m) out[m] *= ((m % 2) ? -1.0 : 1.0) / n;
  return out;
}

std::vector<double> inverse_coeffs(const std::vector<cdouble>& c) {
  const int n = static_cast<int>(c.size());
  std::vector<cdouble> in(c);
  for (int m = 0; m < n; ++m) in[m] *= ((m % 2) ? -1.0 : 1.0) * n;
  std::vector<cdouble> out;
  fft_engine().inv(out, in);
  std::vector<double> s(n);
  for (int j = 0; j < n; ++j) s[j] = out[j].real();
  return s;
}

SpectralField::SpectralField(std::vector<double> samples, Parity parity)
    : samples_(std::move(samples)), parity_(parity) {}

SpectralField SpectralField::zeros(int n, Parity parity) {
  return SpectralField(std::vector<double>(n, 0.0), parity);
}

SpectralField SpectralField::constant(int n, double value) {
  return SpectralField(std::vector<double>(n, value), Parity::Even);
}

SpectralField SpectralField::from_function(int n, const std::function<double(double)>& f,
                                           Parity parity) {
  std::vector<double> s(n);
  for (int j = 0; j < n; ++j) s[j] = f(grid_point(j, n));
  return SpectralField(std::move(s), parity);
}

SpectralField SpectralField::from_sine(int n, const std::vector<double>& b) {
  std::vector<cdouble> c(n, 0.0);
  for (std::size_t k = 1; k <= b.size() && static_cast<int>(k) < n / 2; ++k) {
    c[k] = cdouble(0.0, -0.5 * b[k - 1]);
    c[n - k] = cdouble(0.0, 0.5 * b[k - 1]);
  }
  return from_coeffs(c, Parity::Odd);
}

SpectralField SpectralField::from_cosine(int n, const std::vector<double>& a) {
  std::vector<cdouble> c(n, 0.0);
  if (!a.empty()) c[0] = a[0];
  for (std::size_t k = 1; k < a.size() && static_cast<int>(k) < n / 2; ++k) {
    c[k] = 0.5 * a[k];
    c[n - k] = 0.5 * a[k];
  }
  if (static_cast<int>(a.size()) > n / 2) c[n / 2] = a[n / 2];
  return from_coeffs(c, Parity::Even);
}

SpectralField SpectralField::from_coeffs(const std::vector<cdouble>& c, Parity parity) {
  return SpectralField(inverse_coeffs(c), parity);
}

std::vector<cdouble> SpectralField::coeffs() const { return forward_coeffs(samples_); }

std::vector<double> SpectralField::sine_coefficients(int count) const {
  auto c = coeffs();
  std::vector<double> b(count, 0.0);
  for (int k = 1; k <= count && k < size() / 2; ++k) b[k - 1] = -2.0 * c[k].imag();
  return b;
}

std::vector<double> SpectralField::cosine_coefficients(int count) const {
  auto c = coeffs();
  std::vector<double> a(count, 0.0);
  if (count > 0) a[0] = c[0].real();
  for (int k = 1; k < count && k < size() / 2; ++k) a[k] = 2.0 * c[k].real();
  if (count > size() / 2) a[size() / 2] = c[size() / 2].real();
  return a;
}

double SpectralField::mean() const {
  double s = 0.0;
  for (double v : samples_) s += v;
  return samples_.empty() ? 0.0 : s / samples_.size();
}

double SpectralField::sup_norm() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double SpectralField::value_at(double alpha) const {
  const int n = size();
  auto c = coeffs();
  double v = c[0].real();
  for (int k = 1; k < n / 2; ++k) v += 2.0 * (c[k] * std::polar(1.0, k * alpha)).real();
  v += (c[n / 2] * std::polar(1.0, (n / 2) * alpha)).real();
  return v;
}

Parity product_parity(Parity a, Parity b) {
  if (a == Parity::None || b == Parity::None) return Parity::None;
  return a == b ? Parity::Even : Parity::Odd;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  require_same_size(a, b);
  std::vector<double> s(a.size());
  for (int j = 0; j < a.size(); ++j) s[j] = a[j] + b[j];
  return SpectralField(std::move(s), sum_parity(a.parity(), b.parity()));
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  require_same_size(a, b);
  std::vector<double> s(a.size());
  for (int j = 0; j < a.size(); ++j) s[j] = a[j] - b[j];
  return SpectralField(std::move(s), sum_parity(a.parity(), b.parity()));
}

SpectralField operator*(const SpectralField& a, const SpectralField& b) {
  require_same_size(a, b);
  std::vector<double> s(a.size());
  for (int j = 0; j < a.size(); ++j) s[j] = a[j] * b[j];
  return SpectralField(std::move(s), product_parity(a.parity(), b.parity()));
}

SpectralField operator/(const SpectralField& a, const SpectralField& b) {
  require_same_size(a, b);
  std::vector<double> s(a.size());
  for (int j = 0; j < a.size(); ++j) s[j] = a[j] / b[j];
  return SpectralField(std::move(s), product_parity(a.parity(), b.parity()));
}

SpectralField operator*(double s, const SpectralField& a) {
  std::vector<double> v(a.samples());
  for (double& x : v) x *= s;
  return SpectralField(std::move(v), a.parity());
}

SpectralField operator*(const SpectralField& a, double s) { return s * a; }

SpectralField operator+(const SpectralField& a, double s) {
  std::vector<double> v(a.samples());
  for (double& x : v) x += s;
  return SpectralField(std::move(v), a.parity() == Parity::Even ? Parity::Even : Parity::None);
}

SpectralField operator-(const SpectralField& a) { return -1.0 * a; }

SpectralField map(const SpectralField& f, const std::function<double(double)>& fn, Parity parity) {
  std::vector<double> v(f.size());
  for (int j = 0; j < f.size(); ++j) v[j] = fn(f[j]);
  return SpectralField(std::move(v), parity);
}

static Parity flipped(Parity p) {
  if (p == Parity::Even) return Parity::Odd;
  if (p == Parity::Odd) return Parity::Even;
  return Parity::None;
}

SpectralField hilbert(const SpectralField& f) {
  const int n = f.size();
  auto c = f.coeffs();
  c[0] = 0.0;
  c[n / 2] = 0.0;
  for (int m = 1; m < n; ++m) {
    if (m == n / 2) continue;
    const double sgn = mode_of(m, n) > 0 ? 1.0 : -1.0;
    c[m] *= cdouble(0.0, -sgn);
  }
  return SpectralField::from_coeffs(c, flipped(f.parity()));
}

SpectralField derivative(const SpectralField& f) {
  const int n = f.size();
  auto c = f.coeffs();
  c[n / 2] = 0.0;
  for (int m = 0; m < n; ++m) c[m] *= cdouble(0.0, mode_of(m, n));
  return SpectralField::from_coeffs(c, flipped(f.parity()));
}

SpectralField antiderivative_from(const SpectralField& f, double base) {
  const int n = f.size();
  auto c = f.coeffs();
  if (std::abs(c[0]) > 1e-10) {
    std::ostringstream os;
    os.precision(3);
    os << "integrand mean " << c[0].real() << " exceeds 1e-10";
    throw Error(ErrorKind::NonZeroMean, os.str());
  }
  c[0] = 0.0;
  c[n / 2] = 0.0;
  double at_base = 0.0;
  for (int m = 1; m < n; ++m) {
    if (m == n / 2) continue;
    const int k = mode_of(m, n);
    c[m] /= cdouble(0.0, k);
    at_base += (c[m] * std::polar(1.0, k * base)).real();
  }
  auto F = SpectralField::from_coeffs(c, flipped(f.parity()));
  for (double& v : F.samples()) v -= at_base;
  // An odd antiderivative shifted by a constant is no longer odd.
  if (F.parity() == Parity::Odd && std::abs(at_base) > 1e-14) F.set_parity(Parity::None);
  return F;
}

double disk_extension_eval(const SpectralField& f, double rho, double alpha) {
  if (!(rho > 0.0 && rho < 1.0)) {
    std::ostringstream os;
    os << "rho = " << rho << " outside (0,1)";
    throw Error(ErrorKind::OutOfDomain, os.str());
  }
  const int n = f.size();
  auto c = f.coeffs();
  double v = c[0].real();
  double rk = 1.0;
  for (int k = 1; k < n / 2; ++k) {
    rk *= rho;
    v += 2.0 * rk * (c[k] * std::polar(1.0, k * alpha)).real();
  }
  v += rk * rho * (c[n / 2] * std::polar(1.0, (n / 2) * alpha)).real();
  return v;
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  require_same_size(f, g);
  double s = 0.0;
  for (int j = 0; j < f.size(); ++j) s += f[j] * g[j];
  return s * 2.0 * kPi / f.size();
}

SpectralField symmetrize(const SpectralField& f, Parity parity) {
  if (parity == Parity::None) return f;
  const int n = f.size();
  const double sgn = parity == Parity::Even ? 1.0 : -1.0;
  std::vector<double> s(n);
  for (int j = 0; j < n; ++j) s[j] = 0.5 * (f[j] + sgn * f[reflect_index(j, n)]);
  return SpectralField(std::move(s), parity);
}

SpectralField filter_nyquist(const SpectralField& f) {
  const int n = f.size();
  auto c = f.coeffs();
  c[n / 2] = 0.0;
  return SpectralField::from_coeffs(c, f.parity());
}

SpectralField log_sine_convolution(const SpectralField& f) {
  const int n = f.size();
  auto c = f.coeffs();
  c[0] = 0.0;
  for (int m = 1; m < n; ++m) c[m] *= -kPi / std::abs(mode_of(m, n));
  return SpectralField::from_coeffs(c, f.parity());
}

}  // namespace crapper
