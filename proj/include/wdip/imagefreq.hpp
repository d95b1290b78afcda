/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include "wdip/fft.hpp"
#include "wdip/image.hpp"

namespace wdip::imagefreq {

// All operations use the periodic (circular) boundary model so the spatial
// data term and the spectral Wiener filter describe the same blur operator.
// Kernels are anchored at their geometric center (n odd).

/// Forward/inverse transforms of a single-channel field.
SpectralField transform(const ImageField& image);
ImageField inverse_transform(const SpectralField& spectrum);

/// Periodic spatial convolution with the kernel centered at its geometric
/// center, computed through the FFT. Single-channel input.
ImageField circular_convolve(const ImageField& image, const Kernel& kernel);

/// Zero-pad and roll the kernel so its spectrum multiplies image spectra
/// into circular_convolve results (kernel center lands on bin (0,0)).
ImageField embed_kernel(const Kernel& kernel, int height, int width);

/// Wiener deconvolution W(I_B, k) = F^-1{ conj(F{k}) F{I_B} / (|F{k}|^2 + c) }.
/// Output is intentionally not clamped to [0,1]. Multi-channel inputs are
/// processed per channel. `imag_residue`, when given, receives the largest
/// imaginary magnitude discarded by the final inverse transform.
ImageField wiener_deconvolve(const ImageField& blurred, const Kernel& kernel,
                             double c, double* imag_residue = nullptr);

/// Unchecked single-channel core used by the optimizer, where the kernel is
/// a free variable and need not be normalized.
void wiener_apply(const SpectralField& kernel_spectrum,
                  const SpectralField& blurred_spectrum, double c, double* out);

/// Spectrum of the embedded kernel.
SpectralField kernel_spectrum(const Kernel& kernel, int height, int width);

/// Blend the image border region with its circularly blurred version to
/// soften wraparound seams (optional preprocessing).
ImageField edge_taper(const ImageField& image, const Kernel& kernel);

}  // namespace wdip::imagefreq
