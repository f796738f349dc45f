#include "rslab/quartic.hpp"

#include "rslab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rslab {

KernelDecomp kernel_decompose(std::uint64_t n) {
    if (n < 1)
        throw ValidationError("kernel_decompose: n must be positive");
    KernelDecomp kd;
    kd.n = n;
    kd.m = 1;
    kd.q = n;
    for (std::uint64_t b = 2; b * b * b * b <= kd.q; ++b) {
        std::uint64_t b4 = b * b * b * b;
        while (kd.q % b4 == 0) {
            kd.q /= b4;
            kd.m *= b;
        }
    }
    return kd;
}

std::vector<int> split_pattern(int k, int l) {
    std::vector<int> signs(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
        signs[static_cast<std::size_t>(j)] = j < l ? +1 : -1;
    return signs;
}

namespace {

// One kernel class: all n = m^4 q <= y share the fourth root m * q^{1/4}.
struct ClassTable {
    std::vector<std::uint64_t> qs;   // fourth-power-free values <= y
    std::vector<std::uint64_t> mmax; // largest m with m^4 q <= y
};

ClassTable build_classes(std::uint64_t y) {
    std::vector<bool> has_fourth(y + 1, false);
    for (std::uint64_t b = 2; b * b * b * b <= y; ++b)
        for (std::uint64_t v = b * b * b * b; v <= y; v += b * b * b * b)
            has_fourth[v] = true;
    ClassTable ct;
    for (std::uint64_t q = 1; q <= y; ++q) {
        if (has_fourth[q])
            continue;
        std::uint64_t m = 1;
        while ((m + 1) * (m + 1) * (m + 1) * (m + 1) <= y / q)
            ++m;
        ct.qs.push_back(q);
        ct.mmax.push_back(m);
    }
    return ct;
}

// Set partitions of {0..k-1} where every block meets both sign groups;
// blocks listed in first-slot order.
std::vector<std::vector<std::vector<int>>> crossing_partitions(const std::vector<int>& signs) {
    int k = static_cast<int>(signs.size());
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<std::vector<int>> blocks;

    std::function<void(int)> rec = [&](int slot) {
        if (slot == k) {
            for (const auto& b : blocks) {
                bool plus = false, minus = false;
                for (int s : b)
                    (signs[static_cast<std::size_t>(s)] > 0 ? plus : minus) = true;
                if (!plus || !minus)
                    return;
            }
            out.push_back(blocks);
            return;
        }
        // Index-based: recursion below may reallocate `blocks`.
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            blocks[bi].push_back(slot);
            rec(slot + 1);
            blocks[bi].pop_back();
        }
        blocks.push_back({slot});
        rec(slot + 1);
        blocks.pop_back();
    };
    rec(0);
    return out;
}

struct BlockShape {
    std::vector<int> plus_slots;
    std::vector<int> minus_slots;
};

// Multiplier assignments within one class: equal plus/minus sums, each
// multiplier in [1, mmax].
void enumerate_block(const BlockShape& shape, std::uint64_t q, std::uint64_t mmax,
                     std::vector<std::uint64_t>& tuple, const std::function<void()>& done) {
    std::size_t np = shape.plus_slots.size();
    std::size_t nm = shape.minus_slots.size();
    // Existence: the sum ranges [np, np*mmax] and [nm, nm*mmax] must meet.
    if (np > nm * mmax || nm > np * mmax)
        return;

    std::vector<std::uint64_t> m(np + nm, 0);
    std::function<void(std::size_t, long long)> rec = [&](std::size_t t, long long diff) {
        if (t == np + nm) {
            if (diff != 0)
                return;
            for (std::size_t j = 0; j < np; ++j)
                tuple[static_cast<std::size_t>(shape.plus_slots[j])] =
                    m[j] * m[j] * m[j] * m[j] * q;
            for (std::size_t j = 0; j < nm; ++j)
                tuple[static_cast<std::size_t>(shape.minus_slots[j])] =
                    m[np + j] * m[np + j] * m[np + j] * m[np + j] * q;
            done();
            return;
        }
        bool plus = t < np;
        long long rp2 = static_cast<long long>(plus ? np - t - 1 : 0);
        long long rm2 = static_cast<long long>(plus ? nm : np + nm - t - 1);
        long long mx = static_cast<long long>(mmax);
        for (std::uint64_t v = 1; v <= mmax; ++v) {
            long long d = plus ? diff + static_cast<long long>(v)
                               : diff - static_cast<long long>(v);
            // Future adjustment range is [rp2 - rm2*mx, rp2*mx - rm2].
            bool surplus = d + rp2 - rm2 * mx > 0; // cannot come back down to 0
            bool deficit = d + rp2 * mx - rm2 < 0; // cannot climb back to 0
            if (surplus) {
                if (plus)
                    break; // larger v only raises d further
                continue;
            }
            if (deficit) {
                if (plus)
                    continue; // larger v may fix the deficit
                break;
            }
            m[t] = v;
            rec(t + 1, d);
        }
    };
    rec(0, 0);
}

} // namespace

void for_each_zero_sum(const std::vector<int>& signs, std::uint64_t y,
                       const std::function<void(const std::vector<std::uint64_t>&)>& cb) {
    int k = static_cast<int>(signs.size());
    if (k < 2 || k > 6)
        throw ValidationError("zero-sum enumeration supports 2 <= k <= 6");
    if (signs[0] != +1)
        throw ValidationError("leading sign must be +");
    if (y < 1)
        throw ValidationError("cutoff y must be >= 1");
    bool any_minus = false;
    for (int s : signs) {
        if (s != +1 && s != -1)
            throw ValidationError("signs must be +-1");
        any_minus |= s < 0;
    }
    if (!any_minus)
        return; // all-plus sums never vanish

    ClassTable classes = build_classes(y);
    auto partitions = crossing_partitions(signs);
    std::vector<std::uint64_t> tuple(static_cast<std::size_t>(k), 0);

    for (const auto& blocks : partitions) {
        std::vector<BlockShape> shapes;
        shapes.reserve(blocks.size());
        for (const auto& b : blocks) {
            BlockShape s;
            for (int slot : b)
                (signs[static_cast<std::size_t>(slot)] > 0 ? s.plus_slots : s.minus_slots)
                    .push_back(slot);
            shapes.push_back(std::move(s));
        }

        std::vector<std::size_t> used; // class indices taken by earlier blocks
        std::function<void(std::size_t)> assign = [&](std::size_t bi) {
            if (bi == shapes.size()) {
                cb(tuple);
                return;
            }
            for (std::size_t ci = 0; ci < classes.qs.size(); ++ci) {
                if (std::find(used.begin(), used.end(), ci) != used.end())
                    continue;
                used.push_back(ci);
                enumerate_block(shapes[bi], classes.qs[ci], classes.mmax[ci], tuple,
                                [&]() { assign(bi + 1); });
                used.pop_back();
            }
        };
        assign(0);
    }
}

std::vector<SignedTuple> enumerate_zero_sums(int k, int l, std::uint64_t y) {
    if (k < 2 || k > 6)
        throw ValidationError("enumerate_zero_sums: k must be in [2,6]");
    if (l < 1 || l >= k)
        throw ValidationError("enumerate_zero_sums: need 1 <= l < k");
    auto signs = split_pattern(k, l);
    std::vector<int> ivec(static_cast<std::size_t>(k - 1));
    for (int j = 1; j < k; ++j)
        ivec[static_cast<std::size_t>(j - 1)] = signs[static_cast<std::size_t>(j)] > 0 ? 0 : 1;

    std::vector<SignedTuple> out;
    for_each_zero_sum(signs, y, [&](const std::vector<std::uint64_t>& n) {
        SignedTuple t;
        t.n = n;
        t.i = ivec;
        out.push_back(std::move(t));
    });
    return out;
}

SeparationCertificate separation_certificate(const SignedTuple& t) {
    int k = t.k();
    if (k < 2 || k > 6)
        throw ValidationError("separation_certificate: k must be in [2,6]");
    std::uint64_t maxn = *std::max_element(t.n.begin(), t.n.end());

    double conj = std::pow(4.0, k - 1) - 1.0;            // 4^{k-1} - 1
    double root_exp = std::pow(4.0, k - 2) - 0.25;       // 4^{k-2} - 1/4
    double digits = conj * std::log10(static_cast<double>(k)) +
                    root_exp * std::log10(static_cast<double>(maxn));
    unsigned P = static_cast<unsigned>(std::ceil(digits)) + 20;
    if (P > 512)
        throw ValidationError("separation_certificate: precision demand exceeds 512 digits");

    PrecisionGuard guard(P);
    SeparationCertificate cert;
    cert.digits = P;
    Real alpha = quartic_root(Real(t.n[0]));
    for (int j = 1; j < k; ++j) {
        Real root = quartic_root(Real(t.n[static_cast<std::size_t>(j)]));
        if (t.i[static_cast<std::size_t>(j - 1)] == 0)
            alpha += root;
        else
            alpha -= root;
    }
    cert.threshold = pow(Real(k), 1 - static_cast<long>(std::pow(4.0, k - 1))) *
                     pow(Real(maxn), -Real(root_exp)) / 2;
    cert.is_zero = abs(alpha) < cert.threshold;
    cert.alpha = cert.is_zero ? Real(0) : alpha;
    return cert;
}

namespace {

SeriesValue s_value_weights(int k, int l, std::uint64_t y, const std::vector<Real>& w) {
    SeriesValue sv;
    sv.k = k;
    sv.l = l;
    sv.y = y;
    KahanSum acc;
    auto signs = split_pattern(k, l);
    for_each_zero_sum(signs, y, [&](const std::vector<std::uint64_t>& n) {
        Real term = w[n[0]];
        for (std::size_t j = 1; j < n.size(); ++j)
            term *= w[n[j]];
        acc.add(term);
        ++sv.term_count;
    });
    sv.value = acc.value();
    return sv;
}

std::vector<Real> series_weights(std::uint64_t y, const std::function<Real(std::uint64_t)>& f) {
    std::vector<Real> w(y + 1);
    for (std::uint64_t n = 1; n <= y; ++n) {
        Real r = quartic_root(Real(n)); // n^{7/8} = r^3 sqrt(r)
        w[n] = f(n) / (r * r * r * sqrt(r));
    }
    return w;
}

} // namespace

SeriesValue s_value_f(int k, int l, std::uint64_t y,
                      const std::function<Real(std::uint64_t)>& f) {
    return s_value_weights(k, l, y, series_weights(y, f));
}

SeriesValue s_value(int k, int l, std::uint64_t y, const RankinTable& table) {
    if (y > table.nmax)
        throw ValidationError("s_value: y exceeds table range");
    return s_value_f(k, l, y, [&](std::uint64_t n) { return table.cn(n); });
}

BkValue b_k(int k, std::uint64_t y, const RankinTable& table) {
    if (k < 2 || k > 6)
        throw ValidationError("b_k: k must be in [2,6]");
    if (y > table.nmax)
        throw ValidationError("b_k: y exceeds table range");

    auto weights = series_weights(y, [&](std::uint64_t n) { return table.cn(n); });
    BkValue bk;
    bk.k = k;
    bk.y = y;

    // Binomial-cosine route over the split series.
    Real pi = pi_value();
    KahanSum binom_acc;
    for (int l = 1; l < k; ++l) {
        SeriesValue sv = s_value_weights(k, l, y, weights);
        long long choose = 1;
        for (int j = 0; j < l; ++j)
            choose = choose * (k - 1 - j) / (j + 1);
        binom_acc.add(Real(choose) * sv.value * cos(pi * (k - 2 * l) / 4));
        bk.s_values.push_back(std::move(sv));
    }
    bk.binomial_form = binom_acc.value();

    // Pattern-sum route: every sign vector enumerated independently.
    KahanSum pattern_acc;
    std::vector<int> signs(static_cast<std::size_t>(k));
    for (unsigned mask = 0; mask < (1u << (k - 1)); ++mask) {
        signs[0] = +1;
        int beta = 1;
        for (int j = 1; j < k; ++j) {
            int bit = (mask >> (j - 1)) & 1;
            signs[static_cast<std::size_t>(j)] = bit ? -1 : +1;
            beta += bit ? -1 : +1;
        }
        KahanSum s_acc;
        for_each_zero_sum(signs, y, [&](const std::vector<std::uint64_t>& n) {
            Real term = weights[n[0]];
            for (std::size_t j = 1; j < n.size(); ++j)
                term *= weights[n[j]];
            s_acc.add(term);
        });
        pattern_acc.add(cos(-pi * beta / 4) * s_acc.value());
    }
    bk.pattern_form = pattern_acc.value();

    Real tol = pow(Real(10), -static_cast<long>(working_digits() > 14 ? working_digits() - 12 : 2));
    if (abs(bk.binomial_form - bk.pattern_form) > tol * (1 + abs(bk.binomial_form)))
        throw InternalError("B_k route mismatch: binomial and pattern sums disagree");
    return bk;
}

ConvergenceReport convergence_check(int k, int l, const std::vector<std::uint64_t>& y_grid,
                                    const RankinTable& table) {
    if (y_grid.size() < 3)
        throw ValidationError("convergence_check: need at least 3 grid points");
    for (std::size_t i = 1; i < y_grid.size(); ++i)
        if (y_grid[i] <= y_grid[i - 1])
            throw ValidationError("convergence_check: grid must be ascending");
    if (y_grid.back() > table.nmax)
        throw ValidationError("convergence_check: grid exceeds table range");

    ConvergenceReport rep;
    rep.k = k;
    rep.l = l;
    for (std::size_t i = 0; i < y_grid.size(); ++i) {
        SeriesValue sv = s_value(k, l, y_grid[i], table);
        ConvergencePoint pt;
        pt.y = y_grid[i];
        pt.s = sv.value;
        pt.step = i == 0 ? Real(0) : Real(sv.value - rep.points.back().s);
        rep.points.push_back(std::move(pt));
    }

    // OLS of log(step) on log(y) over nonzero steps.
    KahanSum s1, sx, sy_, sxx, sxy;
    std::size_t used = 0;
    for (std::size_t i = 1; i < rep.points.size(); ++i) {
        if (rep.points[i].step <= 0)
            continue;
        Real lx = log(Real(rep.points[i].y));
        Real ly = log(rep.points[i].step);
        s1.add(Real(1));
        sx.add(lx);
        sy_.add(ly);
        sxx.add(lx * lx);
        sxy.add(lx * ly);
        ++used;
    }
    if (used >= 2) {
        Real det = s1.value() * sxx.value() - sx.value() * sx.value();
        rep.slope = (s1.value() * sxy.value() - sx.value() * sy_.value()) / det;
        rep.slope_ok = rep.slope <= Real("-0.6");
    }

    rep.cauchy_ok = true;
    for (std::size_t i = 2; i < rep.points.size(); ++i)
        if (rep.points[i].step > rep.points[i - 1].step && rep.points[i - 1].step > 0)
            rep.cauchy_ok = false;
    return rep;
}

} // namespace rslab
