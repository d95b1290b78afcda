/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include "wdip/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>

#include "wdip/errors.hpp"

namespace wdip::fft {

namespace {

// FFTW planning is not thread safe; execution on distinct arrays is.
// FFTW_UNALIGNED makes the cached plans valid for any buffer.
std::mutex g_plan_mutex;

fftw_plan plan_for(int h, int w, int sign) {
    static std::map<std::uint64_t, fftw_plan> cache;
    const std::uint64_t key =
        (static_cast<std::uint64_t>(h) << 33) | (static_cast<std::uint64_t>(w) << 1) |
        (sign == FFTW_FORWARD ? 1u : 0u);
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    // Planned out-of-place; every execution below is out-of-place too.
    std::vector<fftw_complex> si(static_cast<std::size_t>(h) * w);
    std::vector<fftw_complex> so(static_cast<std::size_t>(h) * w);
    fftw_plan p = fftw_plan_dft_2d(h, w, si.data(), so.data(), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw Error("fftw plan creation failed");
    cache.emplace(key, p);
    return p;
}

void check_dims(int h, int w) {
    if (h < 1 || w < 1) throw DimensionError("fft: empty field");
}

}  // namespace

SpectralField forward(const double* data, int h, int w) {
    check_dims(h, w);
    const std::size_t n = static_cast<std::size_t>(h) * w;
    std::vector<std::complex<double>> in(n), out(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = data[i];
    fftw_execute_dft(plan_for(h, w, FFTW_FORWARD),
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return SpectralField{h, w, std::move(out)};
}

double inverse_real(const SpectralField& f, double* out) {
    check_dims(f.height, f.width);
    const std::size_t n = f.bins.size();
    std::vector<std::complex<double>> buf(n);
    fftw_execute_dft(plan_for(f.height, f.width, FFTW_BACKWARD),
                     reinterpret_cast<fftw_complex*>(
                         const_cast<std::complex<double>*>(f.bins.data())),
                     reinterpret_cast<fftw_complex*>(buf.data()));
    const double scale = 1.0 / static_cast<double>(n);
    double max_imag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = buf[i].real() * scale;
        max_imag = std::max(max_imag, std::abs(buf[i].imag()) * scale);
    }
    return max_imag;
}

void adjoint_real(const SpectralField& f, double* out) {
    check_dims(f.height, f.width);
    const std::size_t n = f.bins.size();
    std::vector<std::complex<double>> buf(n);
    fftw_execute_dft(plan_for(f.height, f.width, FFTW_BACKWARD),
                     reinterpret_cast<fftw_complex*>(
                         const_cast<std::complex<double>*>(f.bins.data())),
                     reinterpret_cast<fftw_complex*>(buf.data()));
    for (std::size_t i = 0; i < n; ++i) out[i] = buf[i].real();
}

}  // namespace wdip::fft
