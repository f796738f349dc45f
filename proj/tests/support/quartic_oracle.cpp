#include "support/quartic_oracle.hpp"

#include "rslab/real.hpp"

#include <cmath>
#include <functional>

namespace rslab::testing {

TupleSet brute_force_zero_sums(int k, int l, std::uint64_t y) {
    double conj = std::pow(4.0, k - 1) - 1.0;
    double root_exp = std::pow(4.0, k - 2) - 0.25;
    unsigned P = static_cast<unsigned>(std::ceil(conj * std::log10(static_cast<double>(k)) +
                                                 root_exp * std::log10(static_cast<double>(y)))) +
                 20;
    PrecisionGuard guard(P);

    std::vector<Real> root(y + 1);
    for (std::uint64_t n = 1; n <= y; ++n)
        root[n] = quartic_root(Real(n));

    // Per-max(n) zero threshold: half the separation bound
    // k^{1-4^{k-1}} max(n)^{-(4^{k-2}-1/4)}.
    std::vector<Real> thr(y + 1);
    Real k_factor = pow(Real(k), 1 - static_cast<long>(std::pow(4.0, k - 1)));
    for (std::uint64_t n = 1; n <= y; ++n)
        thr[n] = k_factor * pow(Real(n), -Real(root_exp)) / 2;

    TupleSet out;
    std::vector<std::uint64_t> tuple(static_cast<std::size_t>(k));
    std::function<void(int, const Real&, std::uint64_t)> rec =
        [&](int slot, const Real& alpha, std::uint64_t maxn) {
            if (slot == k) {
                if (abs(alpha) < thr[maxn])
                    out.insert(tuple);
                return;
            }
            for (std::uint64_t n = 1; n <= y; ++n) {
                tuple[static_cast<std::size_t>(slot)] = n;
                Real next = slot < l ? Real(alpha + root[n]) : Real(alpha - root[n]);
                rec(slot + 1, next, std::max(maxn, n));
            }
        };
    rec(0, Real(0), 1);
    return out;
}

} // namespace rslab::testing
