/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <complex>
#include <vector>

namespace wdip {

/// Full complex spectrum of a real H×W field, DC at bin (0,0), unnormalized
/// forward transform convention (inverse carries the 1/N factor).
struct SpectralField {
    int height = 0;
    int width = 0;
    std::vector<std::complex<double>> bins;  // row-major height×width

    std::complex<double>& at(int y, int x) {
        return bins[static_cast<std::size_t>(y) * width + x];
    }
    std::complex<double> at(int y, int x) const {
        return bins[static_cast<std::size_t>(y) * width + x];
    }
    std::size_t size() const { return bins.size(); }
};

namespace fft {

/// DFT of a real field (unnormalized).
SpectralField forward(const double* data, int h, int w);

/// Inverse DFT including the 1/(h*w) factor; writes the real part and
/// returns the largest |imaginary| residue encountered.
double inverse_real(const SpectralField& f, double* out);

/// Unnormalized backward DFT (sum with e^{+i...}), real part only.
/// This is the adjoint of `forward` restricted to real inputs.
void adjoint_real(const SpectralField& f, double* out);

}  // namespace fft
}  // namespace wdip
