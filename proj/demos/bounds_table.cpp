// Minimal library walkthrough: build a link from the default parameters and
// print the four bounds at a handful of bandwidths.

#include <cstdio>

#include "wssus/bounds.hpp"
#include "wssus/constellation.hpp"

int main() {
    using namespace wssus;

    const auto sf = ScatteringSpec::brick(0.5e-6, 500.0, 1e-9);  // spread 1e-3, -90 dB
    const PowerBudget power(1e-3, 4.14e-21, 1.0);
    const LinkConfig link(sf, power, 1.25);
    const Constellation qpsk = Constellation::qpsk();
    auto mi = [&](double s) { return rayleigh_cm_mi(qpsk, s); };

    std::printf("%12s %14s %14s %14s %14s\n", "W [Hz]", "ub1", "ub2", "lb", "lb_approx");
    for (double w : {1e8, 1e9, 5e9, 1e10, 1e11, 1e12}) {
        std::printf("%12.3e %14.6e %14.6e %14.6e %14.6e\n", w, ub1(w, link).value, ub2(w, link),
                    lb(w, link, mi).value, lb_approx(w, link).value);
    }
    std::printf("\nawgn infinite-bandwidth capacity: %.6e nat/s\n", awgn_inf_capacity(link));
    std::printf("viterbi_lb(beta=1):               %.6e nat/s\n", viterbi_lb(1.0, link));
    return 0;
}
