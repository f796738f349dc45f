#include "support/fixtures.hpp"

namespace rslab::testing {

const EigenformTable& small_eigen() {
    static EigenformTable table = build_eigenform_table(kFixtureNmax, TauMethod::reference);
    return table;
}

const RankinTable& small_table() {
    static RankinTable table = build_rankin_table(small_eigen());
    return table;
}

const MainTermConstants& small_constants() {
    static MainTermConstants constants = [] {
        CalibrationOptions opts;
        opts.subtract_voronoi = true;
        opts.n_sub = 1000;
        opts.points = 1000;
        return calibrate_constants(small_table(), 2000, opts);
    }();
    return constants;
}

RankinTable constant_table(std::size_t nmax, const Real& value) {
    RankinTable t;
    t.nmax = nmax;
    t.digits = working_digits();
    t.c.assign(nmax + 1, value);
    t.S0.resize(nmax + 1);
    t.S1.resize(nmax + 1);
    t.S0[0] = 0;
    t.S1[0] = 0;
    KahanSum s0, s1;
    for (std::size_t n = 1; n <= nmax; ++n) {
        s0.add(value);
        s1.add(Real(n) * value);
        t.S0[n] = s0.value();
        t.S1[n] = s1.value();
    }
    return t;
}

} // namespace rslab::testing
