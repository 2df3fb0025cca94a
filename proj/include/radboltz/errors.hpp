#ifndef RADBOLTZ_ERRORS_HPP
#define RADBOLTZ_ERRORS_HPP

#include <cstdio>
#include <stdexcept>
#include <string>

namespace radboltz {

namespace detail {
inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}
} // namespace detail

// Raised when an adaptive quadrature cannot meet the requested tolerances.
// `where` carries the failing integral and indices, e.g. "angular_moment(n=3,m=7)".
class quadrature_error : public std::runtime_error {
public:
    explicit quadrature_error(const std::string& where, double achieved, double requested)
        : std::runtime_error(where + ": quadrature stalled at error " + detail::sci(achieved) +
                             " (requested " + detail::sci(requested) + ")"),
          achieved_(achieved), requested_(requested) {}
    double achieved() const { return achieved_; }
    double requested() const { return requested_; }

private:
    double achieved_;
    double requested_;
};

// Raised by solvers on non-finite state, step-size underflow, or exceeded budgets.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by file readers/writers on malformed input; carries line information when known.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& file, long line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
    explicit parse_error(const std::string& what) : std::runtime_error(what), line_(-1) {}
    long line() const { return line_; }

private:
    long line_;
};

} // namespace radboltz

#endif
