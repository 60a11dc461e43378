#pragma once

#include "sourcewave/numerics.hpp"

#include <cstddef>
#include <span>

namespace sourcewave {

/// In-place unnormalized complex DFT of a fixed length, backed by FFTW.
///
/// Plans are created with FFTW_ESTIMATE so the same input always yields the
/// same bits. Planning is serialized internally; executing distinct plans
/// from different threads is safe.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    Fft(Fft&& other) noexcept;
    Fft& operator=(Fft&& other) noexcept;

    std::size_t size() const noexcept { return n_; }

    /// X_k = sum_j x_j exp(-2 pi i jk/n)
    void forward(std::span<Complex> data) const;
    /// x_j = sum_k X_k exp(+2 pi i jk/n), no 1/n factor
    void backward(std::span<Complex> data) const;

private:
    void release() noexcept;

    std::size_t n_ = 0;
    void* forward_plan_ = nullptr;
    void* backward_plan_ = nullptr;
};

/// Signed frequency index of DFT bin k in [-n/2, n/2).
inline long signed_bin(std::size_t k, std::size_t n) noexcept
{
    const long kk = static_cast<long>(k);
    const long nn = static_cast<long>(n);
    return kk < nn / 2 ? kk : kk - nn;
}

} // namespace sourcewave
