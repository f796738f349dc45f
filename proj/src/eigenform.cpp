#include "rslab/eigenform.hpp"

#include "ntt.hpp"
#include "rslab/arith.hpp"
#include "rslab/errors.hpp"
#include "rslab/fileio.hpp"

#include <gmp.h>

#include <cstdio>
#include <numeric>
#include <sstream>

namespace rslab {

namespace {

constexpr std::size_t kReferenceGuard = 10000; // quadratic-cost guard

// Sparse Jacobi series J(q) = sum (-1)^j (2j+1) q^{j(j+1)/2}, truncated to
// degree < len.
struct SparseTerm {
    std::size_t idx;
    long long coeff;
};

std::vector<SparseTerm> jacobi_series(std::size_t len) {
    std::vector<SparseTerm> terms;
    for (std::size_t j = 0;; ++j) {
        std::size_t idx = j * (j + 1) / 2;
        if (idx >= len)
            break;
        long long c = static_cast<long long>(2 * j + 1);
        terms.push_back({idx, (j % 2 == 0) ? c : -c});
    }
    return terms;
}

// Dense exact squaring truncated to `keep` coefficients.
void square_exact_truncate(std::vector<BigInt>& a, std::size_t keep) {
    std::vector<BigInt> c(keep, BigInt(0));
    BigInt twice;
    std::size_t len = a.size();
    for (std::size_t i = 0; i < len && i < keep; ++i) {
        if (mpz_sgn(a[i].backend().data()) == 0)
            continue;
        if (2 * i < keep)
            mpz_addmul(c[2 * i].backend().data(), a[i].backend().data(), a[i].backend().data());
        twice = a[i] << 1;
        std::size_t jmax = std::min(len, keep - i);
        for (std::size_t j = i + 1; j < jmax; ++j) {
            if (mpz_sgn(a[j].backend().data()) == 0)
                continue;
            mpz_addmul(c[i + j].backend().data(), twice.backend().data(), a[j].backend().data());
        }
    }
    a = std::move(c);
}

EigenformTable build_reference(std::size_t nmax) {
    if (nmax > kReferenceGuard)
        throw ValidationError("reference method is limited to nmax <= 10^4");

    // a(n) = coefficient of q^{n-1} in J^8, so degree < nmax suffices.
    std::size_t len = nmax;
    auto jac = jacobi_series(len);

    // J^2 from the sparse form: ~sqrt(2*len)^2 products.
    std::vector<BigInt> coeffs(len, BigInt(0));
    for (const auto& t1 : jac)
        for (const auto& t2 : jac) {
            std::size_t idx = t1.idx + t2.idx;
            if (idx >= len)
                break; // t2 sorted ascending
            coeffs[idx] += BigInt(t1.coeff) * t2.coeff;
        }

    square_exact_truncate(coeffs, len); // J^4
    square_exact_truncate(coeffs, len); // J^8

    EigenformTable table;
    table.nmax = nmax;
    table.a.resize(nmax + 1);
    for (std::size_t n = 1; n <= nmax; ++n)
        table.a[n] = coeffs[n - 1];
    return table;
}

BigInt isqrt_ceil(std::size_t n) {
    BigInt r = sqrt(BigInt(n));
    if (r * r < BigInt(n))
        ++r;
    return r;
}

EigenformTable build_modular(std::size_t nmax) {
    std::size_t len = nmax;

    // Modulus budget: the symmetric CRT range must cover
    // 2 * nmax^{(kappa-1)/2 + 1} * d_max  (Deligne bound with headroom).
    auto d = divisor_count_sieve(nmax);
    std::uint32_t d_max = 1;
    for (std::size_t n = 1; n <= nmax; ++n)
        d_max = std::max(d_max, d[n]);
    BigInt bound = BigInt(2) * d_max * pow(BigInt(nmax), 6) * isqrt_ceil(nmax);

    std::size_t k0 = 0; // reconstruction prefix: first product exceeding bound
    {
        BigInt prod = 1;
        while (k0 < ntt::kPrimeCount && prod <= bound) {
            prod *= ntt::kPrimes[k0].p;
            ++k0;
        }
        if (prod <= bound)
            throw ValidationError("nmax too large for the fixed modulus list");
    }
    std::size_t used = std::max<std::size_t>(5, k0 + 1); // spare primes verify
    used = std::min(used, ntt::kPrimeCount);

    for (std::size_t i = 0; i < used; ++i)
        if (!ntt::is_prime_u64(ntt::kPrimes[i].p))
            throw InternalError("modulus list corrupted: composite entry");

    auto jac = jacobi_series(len);
    std::vector<std::vector<std::uint64_t>> residues(used);
    for (std::size_t pi = 0; pi < used; ++pi) {
        const auto& pr = ntt::kPrimes[pi];
        std::vector<std::uint64_t> poly(len, 0);
        for (const auto& t : jac)
            poly[t.idx] = t.coeff >= 0 ? static_cast<std::uint64_t>(t.coeff)
                                       : pr.p - static_cast<std::uint64_t>(-t.coeff);
        ntt::square_mod_truncate(poly, len, pr);
        ntt::square_mod_truncate(poly, len, pr);
        ntt::square_mod_truncate(poly, len, pr);
        residues[pi] = std::move(poly);
    }

    // Incremental reconstruction over the first k0 primes; remaining primes
    // re-check the result.
    std::vector<BigInt> prefix_prod(k0);
    std::vector<std::uint64_t> inv(k0, 0);
    {
        BigInt prod = 1;
        for (std::size_t i = 0; i < k0; ++i) {
            prefix_prod[i] = prod;
            if (i > 0) {
                std::uint64_t p = ntt::kPrimes[i].p;
                std::uint64_t pm = mpz_fdiv_ui(prod.backend().data(), p);
                inv[i] = powmod_u64(pm, p - 2, p);
            }
            prod *= ntt::kPrimes[i].p;
        }
    }
    BigInt full_prod = prefix_prod[k0 - 1] * ntt::kPrimes[k0 - 1].p;
    BigInt half = full_prod >> 1;

    EigenformTable table;
    table.nmax = nmax;
    table.a.resize(nmax + 1);
    BigInt x, term;
    for (std::size_t n = 1; n <= nmax; ++n) {
        std::size_t idx = n - 1;
        x = residues[0][idx];
        for (std::size_t i = 1; i < k0; ++i) {
            std::uint64_t p = ntt::kPrimes[i].p;
            std::uint64_t xm = mpz_fdiv_ui(x.backend().data(), p);
            std::uint64_t r = residues[i][idx];
            std::uint64_t t = mulmod_u64(r >= xm ? r - xm : r + p - xm, inv[i], p);
            term = prefix_prod[i] * t;
            x += term;
        }
        if (x > half)
            x -= full_prod;
        for (std::size_t i = k0; i < used; ++i) {
            std::uint64_t p = ntt::kPrimes[i].p;
            if (mpz_fdiv_ui(x.backend().data(), p) != residues[i][idx])
                throw InternalError("residue reconstruction inconsistent at n=" +
                                    std::to_string(n) + " (modulus set too small)");
        }
        table.a[n] = x;
    }
    return table;
}

} // namespace

EigenformTable build_eigenform_table(std::size_t nmax, TauMethod method) {
    if (nmax < 1)
        throw ValidationError("nmax must be >= 1");
    EigenformTable table =
        method == TauMethod::reference ? build_reference(nmax) : build_modular(nmax);
    if (table.a[1] != 1)
        throw InternalError("a(1) != 1 after build");
    return table;
}

HeckeReport verify_hecke_relations(const EigenformTable& table, std::size_t limit) {
    std::size_t lim = (limit == 0 || limit > table.nmax) ? table.nmax : limit;
    HeckeReport rep;

    for (std::size_t m = 2; m * m <= lim; ++m) {
        for (std::size_t n = m + 1; m * n <= lim; ++n) {
            if (std::gcd(m, n) != 1)
                continue;
            ++rep.multiplicative_checked;
            if (table.at(m * n) != table.at(m) * table.at(n))
                rep.violations.push_back({"multiplicativity", m, n});
        }
    }

    // Prime-power recursion with p^{kappa-1} = p^11.
    std::vector<bool> is_comp(lim + 1, false);
    for (std::size_t p = 2; p <= lim; ++p) {
        if (is_comp[p])
            continue;
        for (std::size_t q = p * p; q <= lim; q += p)
            is_comp[q] = true;
        BigInt p11 = pow(BigInt(p), 11);
        std::size_t pj = p; // p^j
        for (std::size_t j = 1; pj <= lim / p; ++j) {
            std::size_t pj1 = pj * p;
            ++rep.prime_power_checked;
            BigInt expect = table.at(p) * table.at(pj) - p11 * table.at(pj / p);
            if (table.at(pj1) != expect)
                rep.violations.push_back({"prime-power", p, static_cast<std::uint64_t>(j)});
            if (pj1 > lim / p)
                break;
            pj = pj1;
        }
    }

    auto d = divisor_count_sieve(lim);
    for (std::size_t n = 1; n <= lim; ++n) {
        ++rep.deligne_checked;
        BigInt lhs = table.at(n) * table.at(n);
        BigInt rhs = pow(BigInt(n), 11) * d[n] * d[n];
        if (lhs > rhs)
            rep.violations.push_back({"deligne", n, 0});
    }
    return rep;
}

CongruenceReport congruence_check(const EigenformTable& table) {
    auto sigma11 = sigma_mod_sieve(table.nmax, 11, 691);
    CongruenceReport rep;
    for (std::size_t n = 1; n <= table.nmax; ++n) {
        ++rep.checked;
        if (mpz_fdiv_ui(table.at(n).backend().data(), 691) != sigma11[n])
            rep.violations.push_back(n);
    }
    if (!rep.ok())
        throw InternalError("mod-691 congruence violated at n=" +
                            std::to_string(rep.violations.front()) +
                            " (corrupted coefficient computation)");
    return rep;
}

void write_eigenform_cache(const std::string& path, const EigenformTable& table) {
    std::ostringstream out;
    out << "rankin-cache v1\n";
    out << "kappa " << table.form.weight << "\n";
    out << "nmax " << table.nmax << "\n";
    for (std::size_t n = 1; n <= table.nmax; ++n)
        out << n << " " << table.at(n).str() << "\n";
    atomic_write_text(path, out.str());
}

EigenformTable read_eigenform_cache(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) || line != "rankin-cache v1")
        throw ValidationError("bad eigenform cache header in " + path);
    unsigned kappa = 0;
    std::size_t nmax = 0;
    std::string key;
    in >> key >> kappa;
    if (key != "kappa" || kappa != 12)
        throw ValidationError("unsupported kappa in eigenform cache");
    in >> key >> nmax;
    if (key != "nmax" || nmax < 1)
        throw ValidationError("bad nmax in eigenform cache");

    EigenformTable table;
    table.nmax = nmax;
    table.a.resize(nmax + 1);
    for (std::size_t i = 1; i <= nmax; ++i) {
        std::size_t n = 0;
        std::string value;
        if (!(in >> n >> value) || n != i)
            throw ValidationError("truncated eigenform cache at line " + std::to_string(i));
        table.a[n] = BigInt(value);
    }
    if (table.a[1] != 1)
        throw ValidationError("eigenform cache fails a(1)=1");
    return table;
}

} // namespace rslab
