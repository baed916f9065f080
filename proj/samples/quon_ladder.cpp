// Builds the quon up-ladder from the vacuum and prints E_n next to w[n]_q.
#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "alo/alo.hpp"

int main(int argc, char** argv)
{
    const double q = argc > 1 ? std::atof(argv[1]) : 0.5;
    const double omega = 1.0;
    try {
        const auto m = alo::make_quon({q, omega}, 40, 10);
        const alo::Operator z = alo::adjoint(m.b);
        const auto rel = alo::verify_relation(m.H0, z, alo::RelationKind::Generalized);
        std::cout << "lambda = " << rel.lambda.real() << "  residual = " << rel.residual << '\n';

        const auto seed = alo::seed_finder(m.H0, m.b, alo::Side::Right);
        const auto chain = alo::build_chain(rel, seed.pair, alo::Direction::Up, 12, {});
        std::cout << std::setw(4) << "n" << std::setw(16) << "E_n (chain)" << std::setw(16) << "w[n]_q" << '\n';
        for (std::size_t n = 0; n < chain.size(); ++n)
            std::cout << std::setw(4) << n << std::setw(16) << chain.coeffs.energies_up[n].real() << std::setw(16)
                      << omega * alo::q_integer(n, q) << '\n';
        std::cout << "stopped: " << alo::to_string(chain.reason) << '\n';
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
}
