#ifndef SQUIDFAN_ERRORS_HPP
#define SQUIDFAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace squidfan
{

// Every failure raised by the library derives from Error. The CLI maps the
// concrete type to a process exit code.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class ArgumentError : public Error
{
public:
    using Error::Error;
};

class IntegrationError : public Error
{
public:
    using Error::Error;
};

// The rate never leaves zero on [0, phi0/2] for the requested bias.
class NoThresholdError : public Error
{
public:
    using Error::Error;
};

// Threshold cannot be reached even with every input saturated (fraction > 1).
class UnreachableThresholdError : public Error
{
public:
    using Error::Error;
};

class CapacityError : public Error
{
public:
    using Error::Error;
};

class SaturationError : public Error
{
public:
    using Error::Error;
};

// A design does not satisfy the flux-limiting inductance constraint.
class ConstraintViolation : public Error
{
public:
    using Error::Error;
};

namespace detail
{
inline void require(bool condition, const std::string& message)
{
    if (!condition)
        throw ArgumentError(message);
}
} // namespace detail

} // namespace squidfan

#endif
