#ifndef STURM_ERROR_HPP
#define STURM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sturm {

/// Base class of every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Formula text could not be parsed. `offset()` is a byte offset into the source.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A formula was evaluated outside its real domain or produced a non-finite value.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A potential violates the hypotheses of its declared regularity class.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Quadrature, ODE integration or root bracketing did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Raised by count_negative when theta(b)/pi lies within the guard band of an integer.
class AtJumpAmbiguity : public Error {
public:
    AtJumpAmbiguity(double lambda, double theta_b)
        : Error("lambda = " + std::to_string(lambda) + " is at a jump of N (theta_b/pi = " +
                std::to_string(theta_b / 3.141592653589793) + ")"),
          lambda_(lambda), theta_b_(theta_b) {}

    double lambda() const noexcept { return lambda_; }
    double theta_b() const noexcept { return theta_b_; }

private:
    double lambda_;
    double theta_b_;
};

} // namespace sturm

#endif // STURM_ERROR_HPP
