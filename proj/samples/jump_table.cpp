// Prints lambda_n and the normalised deviation e_n = lambda_n D / pi - n for
// V(x) = 2 + sin(x) on (0, 3), next to the Liouville-Green bracket at lambda_n.
//
//   ./jump_table [n_max]

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "sturm/sturm.hpp"

int main(int argc, char** argv) {
    const long n_max = argc > 1 ? std::strtol(argv[1], nullptr, 10) : 20;
    if (n_max < 1) {
        std::fprintf(stderr, "n_max must be positive\n");
        return 64;
    }

    const auto p = sturm::Potential::theorem_class(sturm::parse("2 + sin(x)"), 0.0, 3.0);
    const auto lg = sturm::lg_data(p, 512);
    const auto records = sturm::jump_sequence(p, 1, n_max);

    std::printf("D = %.15f  C = %.6e\n", lg.D, lg.C);
    std::printf("%5s %22s %14s %14s %s\n", "n", "lambda_n", "e_n", "n*e_n", "bracket at lambda_n(1+1e-8)");
    for (const auto& r : records) {
        const double l = r.lambda_n * (1 + 1e-8);
        std::printf("%5lld %22.15f %14.6e %14.6e", static_cast<long long>(r.n), r.lambda_n, r.e_n, r.n * r.e_n);
        if (l > std::sqrt(lg.C)) {
            const auto br = sturm::count_bracket(lg, l);
            std::printf(" [%lld, %lld]", static_cast<long long>(br.lower), static_cast<long long>(br.upper));
        }
        std::printf("\n");
    }
}
