#include <algorithm>
#include <sstream>

#include "qif/dsl.hpp"
#include "qif/error.hpp"

namespace qif::dsl {

std::string demo_passwords_lax() {
    return "// password refresh, lax policy: any fresh uniform choice,\n"
           "// then an over-the-shoulder glimpse of a value the new password is not\n"
           "var X : {A,B,C}\n"
           "X <- uniform {A, B, C}\n"
           "leak uniform {succ(X), pred(X)}\n";
}

std::string demo_passwords_strict() {
    return "// password refresh, strict policy: the new password must differ,\n"
           "// then the same over-the-shoulder glimpse\n"
           "var X : {A,B,C}\n"
           "X <- uniform {succ(X), pred(X)}\n"
           "leak uniform {succ(X), pred(X)}\n";
}

std::string demo_expmod(int bits, const std::vector<int>& divisors) {
    if (bits < 4 || bits > 8)
        throw DomainError("expmod demo supports 4..8 exponent bits");
    if (divisors.empty())
        throw DomainError("expmod demo needs a nonempty divisor set");
    std::vector<int> ds = divisors;
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    for (int d : ds)
        if (d != 2 && d != 3 && d != 5)
            throw DomainError("expmod demo divisors must come from {2,3,5}");
    if (ds.front() < 2) throw DomainError("divisors must be at least 2");

    long long top = (1LL << bits) - 1;
    int maxd = ds.back();
    std::ostringstream src;
    src << "// obfuscated fast exponentiation, reduced state (E, D, R):\n";
    src << "// each round draws a secret divisor, leaks only whether it divides E\n";
    src << "// exactly, then shrinks E; base and power do not influence the\n";
    src << "// observations or E and are omitted from the state\n";
    src << "var E : int[0.." << top << "]\n";
    src << "var D : {";
    for (std::size_t i = 0; i < ds.size(); ++i) src << (i ? "," : "") << ds[i];
    src << "}\n";
    src << "var R : int[0.." << (maxd - 1) << "]\n";
    src << "while E != 0 do\n";
    src << "  D <- uniform {";
    for (std::size_t i = 0; i < ds.size(); ++i) src << (i ? ", " : "") << ds[i];
    src << "}\n";
    src << "  R <- uniform {E mod D}\n";
    src << "  leak uniform {R != 0}\n";
    src << "  E <- uniform {E div D}\n";
    src << "od unroll " << bits << "\n";
    return src.str();
}

} // namespace qif::dsl
