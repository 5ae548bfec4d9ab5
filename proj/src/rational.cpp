#include "qif/rational.hpp"

#include <cmath>

namespace qif {

Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            mpz_class p(s);
            return Rat(p);
        }
        mpz_class p(s.substr(0, slash));
        mpz_class q(s.substr(slash + 1));
        if (sgn(q) == 0) throw DomainError("rational with zero denominator: " + s);
        Rat r(p);
        r /= Rat(q);
        return r;
    } catch (const std::invalid_argument&) {
        throw DomainError("malformed rational: '" + s + "'");
    }
}

std::string rat_str(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double log2_rat(const Rat& q) {
    if (sgn(q) <= 0) throw DomainError("log2 of non-positive rational");
    // mantissa-exponent split avoids overflow for huge numerators/denominators
    signed long ep = 0, eq = 0;
    double mp = mpz_get_d_2exp(&ep, q.get_num().get_mpz_t());
    double mq = mpz_get_d_2exp(&eq, q.get_den().get_mpz_t());
    return (std::log2(mp) + static_cast<double>(ep)) -
           (std::log2(mq) + static_cast<double>(eq));
}

} // namespace qif
