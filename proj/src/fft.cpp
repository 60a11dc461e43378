#include "sourcewave/fft.hpp"

#include "sourcewave/errors.hpp"

#include <fftw3.h>

#include <mutex>
#include <utility>

namespace sourcewave {

namespace {

std::mutex& planner_mutex()
{
    static std::mutex mutex;
    return mutex;
}

fftw_complex* as_fftw(std::span<Complex> data)
{
    return reinterpret_cast<fftw_complex*>(data.data());
}

} // namespace

Fft::Fft(std::size_t n) : n_(n)
{
    if (n == 0)
        fail(ErrorKind::configuration, "Fft", "transform length must be positive");
    std::lock_guard lock(planner_mutex());
    auto* buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_plan_ = fftw_plan_dft_1d(len, buffer, buffer, FFTW_FORWARD, flags);
    backward_plan_ = fftw_plan_dft_1d(len, buffer, buffer, FFTW_BACKWARD, flags);
    fftw_free(buffer);
    if (!forward_plan_ || !backward_plan_) {
        release();
        fail(ErrorKind::configuration, "Fft", "FFTW could not create a plan");
    }
}

Fft::~Fft() { release(); }

Fft::Fft(Fft&& other) noexcept
    : n_(std::exchange(other.n_, 0)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr))
{
}

Fft& Fft::operator=(Fft&& other) noexcept
{
    if (this != &other) {
        release();
        n_ = std::exchange(other.n_, 0);
        forward_plan_ = std::exchange(other.forward_plan_, nullptr);
        backward_plan_ = std::exchange(other.backward_plan_, nullptr);
    }
    return *this;
}

void Fft::release() noexcept
{
    if (!forward_plan_ && !backward_plan_)
        return;
    std::lock_guard lock(planner_mutex());
    if (forward_plan_)
        fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (backward_plan_)
        fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    forward_plan_ = nullptr;
    backward_plan_ = nullptr;
}

void Fft::forward(std::span<Complex> data) const
{
    if (data.size() != n_)
        fail(ErrorKind::configuration, "Fft::forward", "buffer length does not match the plan");
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data), as_fftw(data));
}

void Fft::backward(std::span<Complex> data) const
{
    if (data.size() != n_)
        fail(ErrorKind::configuration, "Fft::backward", "buffer length does not match the plan");
    fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(data), as_fftw(data));
}

} // namespace sourcewave
