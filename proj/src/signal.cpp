#include "rri/signal.hpp"

#include <cmath>
#include <complex>
#include <unsupported/Eigen/FFT>

namespace rri {

TimeSeries remove_gravity(const TimeSeries& ts, double g) {
  TimeSeries out = ts;
  for (auto& ch : out.channels)
    for (double& v : ch) v -= g;
  return out;
}

namespace {

struct Biquad {
  double b0, b1, b2, a1, a2;
};

Biquad design(double fc, double fs, bool high) {
  if (!(fs > 0.0) || !(fc > 0.0) || !(fc < 0.5 * fs))
    throw ValidationError("filter: need 0 < fc < fs/2");
  const double K = std::tan(kPi * fc / fs);
  const double q = 1.0 / std::sqrt(2.0);
  const double norm = 1.0 / (1.0 + K / q + K * K);
  Biquad f{};
  if (high) {
    f.b0 = norm;
    f.b1 = -2.0 * norm;
    f.b2 = norm;
  } else {
    f.b0 = K * K * norm;
    f.b1 = 2.0 * f.b0;
    f.b2 = f.b0;
  }
  f.a1 = 2.0 * (K * K - 1.0) * norm;
  f.a2 = (1.0 - K / q + K * K) * norm;
  return f;
}

// direct form II transposed, state preset to the steady state for a
// constant input x[0] (step-matched start: low-pass opens at x[0],
// high-pass opens settled at zero)
std::vector<double> run_biquad(const Biquad& f, const std::vector<double>& x) {
  std::vector<double> y(x.size());
  if (x.empty()) return y;
  const double x0 = x[0];
  const double y_ss = x0 * (f.b0 + f.b1 + f.b2) / (1.0 + f.a1 + f.a2);
  double z2 = f.b2 * x0 - f.a2 * y_ss;
  double z1 = f.b1 * x0 - f.a1 * y_ss + z2;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double yi = f.b0 * x[i] + z1;
    z1 = f.b1 * x[i] - f.a1 * yi + z2;
    z2 = f.b2 * x[i] - f.a2 * yi;
    y[i] = yi;
  }
  return y;
}

}  // namespace

std::vector<double> lowpass(const std::vector<double>& x, double fc, double fs) {
  return run_biquad(design(fc, fs, false), x);
}

std::vector<double> highpass(const std::vector<double>& x, double fc, double fs) {
  return run_biquad(design(fc, fs, true), x);
}

TimeSeries lowpass(const TimeSeries& ts, double fc) {
  if (!(ts.dt > 0.0)) throw ValidationError("filter: time series needs dt > 0");
  TimeSeries out = ts;
  for (auto& ch : out.channels) ch = lowpass(ch, fc, 1.0 / ts.dt);
  return out;
}

TimeSeries highpass(const TimeSeries& ts, double fc) {
  if (!(ts.dt > 0.0)) throw ValidationError("filter: time series needs dt > 0");
  TimeSeries out = ts;
  for (auto& ch : out.channels) ch = highpass(ch, fc, 1.0 / ts.dt);
  return out;
}

AmplitudeSpectrum amplitude_spectrum(const TimeSeries& ts) {
  if (!(ts.dt > 0.0)) throw ValidationError("spectrum: time series needs dt > 0");
  const std::size_t n = ts.n_samples();
  if (n < 2) throw ValidationError("spectrum: need at least 2 samples");
  AmplitudeSpectrum spec;
  spec.df = 1.0 / (static_cast<double>(n) * ts.dt);
  Eigen::FFT<double> fft;
  const std::size_t bins = n / 2 + 1;
  for (const auto& ch : ts.channels) {
    std::vector<std::complex<double>> freq;
    std::vector<double> time(ch.begin(), ch.end());
    fft.fwd(freq, time);
    std::vector<double> mag(bins);
    for (std::size_t k = 0; k < bins; ++k) mag[k] = std::abs(freq[k]) * ts.dt;
    spec.magnitudes.push_back(std::move(mag));
  }
  return spec;
}

AmplitudeSpectrum smooth_spectrum(const AmplitudeSpectrum& spec, double width_hz) {
  if (!(spec.df > 0.0)) throw ValidationError("smooth: spectrum needs df > 0");
  if (width_hz < spec.df) throw ValidationError("smooth: width must be >= df");
  const int k = std::max(1, static_cast<int>(std::lround(width_hz / spec.df)));
  const int hl = (k - 1) / 2, hr = k / 2;
  AmplitudeSpectrum out;
  out.df = spec.df;
  for (const auto& mag : spec.magnitudes) {
    const int n = static_cast<int>(mag.size());
    std::vector<double> sm(mag.size());
    for (int i = 0; i < n; ++i) {
      const int a = std::max(0, i - hl), b = std::min(n - 1, i + hr);
      double acc = 0.0;
      for (int j = a; j <= b; ++j) acc += mag[j];
      sm[i] = acc / static_cast<double>(b - a + 1);
    }
    out.magnitudes.push_back(std::move(sm));
  }
  return out;
}

}  // namespace rri
