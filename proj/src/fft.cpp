#include "phaselab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "phaselab/units.hpp"

namespace phaselab::fft {
namespace {

enum class Kind { c2c_fwd, c2c_bwd, r2c, c2r };
using Key = std::tuple<Kind, std::size_t, std::size_t, std::size_t, std::size_t>;

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(Kind kind, std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist) {
        const Key key{kind, n, howmany, stride, dist};
        std::lock_guard<std::mutex> lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        const int len = static_cast<int>(n);
        const int hm = static_cast<int>(howmany);
        const int st = static_cast<int>(stride);
        const int ds = static_cast<int>(dist);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        const std::size_t span = (howmany - 1) * dist + (n - 1) * stride + 1;
        const std::size_t half = n / 2 + 1;
        fftw_plan plan = nullptr;
        switch (kind) {
            case Kind::c2c_fwd:
            case Kind::c2c_bwd: {
                std::vector<cplx> buf(span);
                auto* p = reinterpret_cast<fftw_complex*>(buf.data());
                plan = fftw_plan_many_dft(1, &len, hm, p, nullptr, st, ds, p, nullptr, st, ds,
                                          kind == Kind::c2c_fwd ? FFTW_FORWARD : FFTW_BACKWARD, flags);
                break;
            }
            case Kind::r2c: {
                std::vector<double> in(span);
                std::vector<cplx> out(half * howmany);
                const int hd = static_cast<int>(half);
                plan = fftw_plan_many_dft_r2c(1, &len, hm, in.data(), nullptr, st, ds,
                                              reinterpret_cast<fftw_complex*>(out.data()), nullptr, 1, hd, flags);
                break;
            }
            case Kind::c2r: {
                std::vector<double> out(span);
                std::vector<cplx> in(half * howmany);
                const int hd = static_cast<int>(half);
                plan = fftw_plan_many_dft_c2r(1, &len, hm, reinterpret_cast<fftw_complex*>(in.data()), nullptr, 1,
                                              hd, out.data(), nullptr, st, ds, flags);
                break;
            }
        }
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void c2c(cplx* data, std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist, int sign) {
    fftw_plan plan = cache().get(sign < 0 ? Kind::c2c_fwd : Kind::c2c_bwd, n, howmany, stride, dist);
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, p, p);
}

void r2c(const double* in, cplx* out, std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist) {
    fftw_plan plan = cache().get(Kind::r2c, n, howmany, stride, dist);
    fftw_execute_dft_r2c(plan, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void c2r(cplx* in, double* out, std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist) {
    fftw_plan plan = cache().get(Kind::c2r, n, howmany, stride, dist);
    fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(in), out);
}

double wavenumber(std::size_t m, std::size_t n, double h) noexcept {
    long mm = static_cast<long>(m);
    const long nn = static_cast<long>(n);
    if (mm > nn / 2) mm -= nn;
    if (mm == nn / 2) mm = -nn / 2;
    return 2.0 * kPi * static_cast<double>(mm) / (static_cast<double>(n) * h);
}

void shift_real_lines(double* data, std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist,
                      double h, const std::function<double(std::size_t)>& shift) {
    const std::size_t half = n / 2 + 1;
    std::vector<cplx> coeff(half * howmany);
    r2c(data, coeff.data(), n, howmany, stride, dist);
    const double inv_n = 1.0 / static_cast<double>(n);
    const double base = 2.0 * kPi / (static_cast<double>(n) * h);
    for (std::size_t r = 0; r < howmany; ++r) {
        const double c = shift(r);
        cplx* line = coeff.data() + r * half;
        // recursive phase, refreshed every 64 modes to bound rounding drift
        const cplx step = std::polar(1.0, -base * c);
        cplx phase(1.0, 0.0);
        for (std::size_t m = 0; m < half; ++m) {
            if (m % 64 == 0) phase = std::polar(1.0, -base * c * static_cast<double>(m));
            if (2 * m == n)
                line[m] *= std::cos(base * c * static_cast<double>(m)) * inv_n;
            else
                line[m] *= phase * inv_n;
            phase *= step;
        }
    }
    c2r(coeff.data(), data, n, howmany, stride, dist);
}

std::vector<cplx> derivative(const std::vector<cplx>& line, double h, int order) {
    const std::size_t n = line.size();
    std::vector<cplx> out = line;
    if (order == 0 || n < 2) return out;
    c2c(out.data(), n, 1, 1, n, -1);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double k = wavenumber(m, n, h);
        if (2 * m == n && (order % 2) != 0) {
            out[m] = 0.0;
            continue;
        }
        out[m] *= std::pow(cplx(0.0, k), order) * inv_n;
    }
    c2c(out.data(), n, 1, 1, n, +1);
    return out;
}

std::vector<double> derivative(const std::vector<double>& line, double h, int order) {
    std::vector<cplx> c(line.begin(), line.end());
    auto d = derivative(c, h, order);
    std::vector<double> out(line.size());
    for (std::size_t i = 0; i < line.size(); ++i) out[i] = d[i].real();
    return out;
}

}  // namespace phaselab::fft
