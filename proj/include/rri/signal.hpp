#pragma once

#include "rri/types.hpp"

namespace rri {

// Subtract the static gravity offset from an accelerometer series.
TimeSeries remove_gravity(const TimeSeries& ts, double g = 9.82);

// Second-order Butterworth filters (single biquad, causal, direct form
// II transposed). Internal state is initialized to the steady state for
// a constant input equal to the first sample, so a low-pass starts at
// the first input value and a high-pass starts settled near zero --
// no startup transient either way.
std::vector<double> lowpass(const std::vector<double>& x, double fc, double fs);
std::vector<double> highpass(const std::vector<double>& x, double fc, double fs);
TimeSeries lowpass(const TimeSeries& ts, double fc);
TimeSeries highpass(const TimeSeries& ts, double fc);

// One-sided amplitude spectrum |X(f)| * dt per channel; floor(N/2)+1 bins
// spaced df = 1/(N*dt).
AmplitudeSpectrum amplitude_spectrum(const TimeSeries& ts);

// Centered moving-average smoothing with window width_hz (>= df). Edge
// windows shrink to the available bins.
AmplitudeSpectrum smooth_spectrum(const AmplitudeSpectrum& spec, double width_hz);

}  // namespace rri
