#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace crapper {

using cdouble = std::complex<double>;

enum class Parity { Even, Odd, None };

const char* to_string(Parity p);

// Uniform grid alpha_j = -pi + 2 pi j / N.
std::vector<double> grid(int n);
double grid_point(int j, int n);
// Index of -alpha_j on the same grid.
inline int reflect_index(int j, int n) { return (n - j) % n; }

// Real 2pi-periodic function sampled on the uniform grid. Coefficients are
// computed on demand: f(alpha) = sum_k c_k exp(i k alpha), |k| <= N/2.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(std::vector<double> samples, Parity parity = Parity::None);

  static SpectralField zeros(int n, Parity parity = Parity::None);
  static SpectralField constant(int n, double value);
  static SpectralField from_function(int n, const std::function<double(double)>& f,
                                     Parity parity = Parity::None);
  // b[k-1] multiplies sin(k alpha).
  static SpectralField from_sine(int n, const std::vector<double>& b);
  // a[k] multiplies cos(k alpha); a[0] is the mean, a[N/2] the Nyquist mode.
  static SpectralField from_cosine(int n, const std::vector<double>& a);
  // Full FFT-ordered coefficient vector of length N.
  static SpectralField from_coeffs(const std::vector<cdouble>& c, Parity parity = Parity::None);

  int size() const { return static_cast<int>(samples_.size()); }
  const std::vector<double>& samples() const { return samples_; }
  std::vector<double>& samples() { return samples_; }
  double operator[](int j) const { return samples_[j]; }
  double& operator[](int j) { return samples_[j]; }
  Parity parity() const { return parity_; }
  void set_parity(Parity p) { parity_ = p; }

  // FFT ordering: index m holds mode m for m < N/2, mode m - N above.
  std::vector<cdouble> coeffs() const;
  std::vector<double> sine_coefficients(int count) const;
  std::vector<double> cosine_coefficients(int count) const;

  double mean() const;
  double sup_norm() const;
  double value_at(double alpha) const;  // trigonometric interpolation

 private:
  std::vector<double> samples_;
  Parity parity_ = Parity::None;
};

Parity product_parity(Parity a, Parity b);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(const SpectralField& a, const SpectralField& b);
SpectralField operator/(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double s, const SpectralField& a);
SpectralField operator*(const SpectralField& a, double s);
SpectralField operator+(const SpectralField& a, double s);
SpectralField operator-(const SpectralField& a);

SpectralField map(const SpectralField& f, const std::function<double(double)>& fn, Parity parity);

// Multiplier -i sign(k); the Nyquist mode is dropped.
SpectralField hilbert(const SpectralField& f);
// Multiplier i k; the Nyquist mode is dropped.
SpectralField derivative(const SpectralField& f);
// F with F(base) = 0 and F' = f. Throws NonZeroMean if |mean f| > 1e-10.
SpectralField antiderivative_from(const SpectralField& f, double base = -3.14159265358979323846);
// sum_k c_k rho^|k| exp(i k alpha) for 0 < rho < 1.
double disk_extension_eval(const SpectralField& f, double rho, double alpha);
// Trapezoidal L2 product on [-pi, pi].
double inner_product(const SpectralField& f, const SpectralField& g);

// (f(alpha) + f(-alpha))/2 or (f(alpha) - f(-alpha))/2; None returns f.
SpectralField symmetrize(const SpectralField& f, Parity parity);
SpectralField filter_nyquist(const SpectralField& f);
// Convolution with log|2 sin((alpha - a')/2)|, i.e. multiplier -pi/|k|.
SpectralField log_sine_convolution(const SpectralField& f);

// Low-level transforms on the grid convention above.
std::vector<cdouble> forward_coeffs(const std::vector<double>& samples);
std::vector<double> inverse_coeffs(const std::vector<cdouble>& c);

}  // namespace crapper
