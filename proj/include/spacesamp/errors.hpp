#ifndef SPACESAMP_ERRORS_HPP
#define SPACESAMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spacesamp {

// Bad caller input: invalid parameters, malformed vectors, infeasible settings.
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal identity violated (e.g. a profile that must be flat is not).
// Signals a numerical or logic fault rather than bad input.
class consistency_error : public std::runtime_error {
public:
    explicit consistency_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A variance contribution hit a pair with zero joint inclusion probability.
class non_estimable_error : public domain_error {
public:
    non_estimable_error(int k, int l, const std::string& msg)
        : domain_error(msg), k_(k), l_(l) {}
    int unit_k() const { return k_; }
    int unit_l() const { return l_; }

private:
    int k_;
    int l_;
};

} // namespace spacesamp

#endif
