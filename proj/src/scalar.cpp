#include "hypercal/scalar.hpp"

#include <cctype>

namespace hypercal {

Rational Rational::parse(const std::string& s) {
    // -?digits or -?digits/digits, nothing else (no spaces, no '+', no hex).
    std::size_t pos = 0;
    if (pos < s.size() && s[pos] == '-') ++pos;
    std::size_t num_begin = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == num_begin) throw ParseError("bad rational literal: '" + s + "'");
    if (pos < s.size()) {
        if (s[pos] != '/') throw ParseError("bad rational literal: '" + s + "'");
        ++pos;
        std::size_t den_begin = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == den_begin || pos != s.size())
            throw ParseError("bad rational literal: '" + s + "'");
        std::string den = s.substr(den_begin);
        bool all_zero = den.find_first_not_of('0') == std::string::npos;
        if (all_zero) throw ParseError("zero denominator in '" + s + "'");
    }
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw ParseError("bad rational literal: '" + s + "'");
    return Rational(q);
}

} // namespace hypercal
