#ifndef PADLEX_ERRORS_HPP
#define PADLEX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace padlex {

// Root of the library's error hierarchy.  Precondition misuse (wrong prime,
// mixed primes, malformed arguments) throws std::invalid_argument instead;
// everything that can be triggered by well-formed but unlucky input derives
// from Error so callers can catch it as a unit.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Valuation of a quantity known only to be 0 within the working precision.
struct IndeterminateValuation : Error {
    using Error::Error;
};

// An operation needed more stored digits than the operand carries.
struct InsufficientPrecision : Error {
    using Error::Error;
};

struct DivisionByZero : Error {
    using Error::Error;
};

// Angular class of zero requested where a unit residue is required.
struct ZeroClass : Error {
    using Error::Error;
};

// No b-th root exists (valuation not divisible, unit not a residue, or no
// branch lies in the requested angular class).
struct NoRoot : Error {
    using Error::Error;
};

// Several b-th roots exist and no angular class was given to pick one.
struct AmbiguousRoot : Error {
    using Error::Error;
};

// Root degree shares a factor with the prime; Hensel lifting does not apply.
struct UnsupportedRamifiedRoot : Error {
    using Error::Error;
};

// Point lies outside the domain of the function being evaluated.
struct OutsideDomain : Error {
    using Error::Error;
};

// A derivative-order formula produced a non-integer where an integer order
// is required.
struct NonIntegerOrder : Error {
    using Error::Error;
};

// Ball decomposition requested for a point fiber.
struct ZeroCellHasNoBalls : Error {
    using Error::Error;
};

// Glueing parts disagree on the overlap of their domains.
struct DisagreementOnSharedDomain : Error {
    using Error::Error;
};

// Function fails the 1-Lipschitz certificate required by an extension rule.
struct NotUnitLipschitz : Error {
    using Error::Error;
};

// Rescaling factor is not a power of the prime.
struct UnsupportedLambda : Error {
    using Error::Error;
};

// Requested order window misses the fiber entirely.
struct EmptyWindow : Error {
    using Error::Error;
};

// Retraction or distance query against an empty point set.
struct EmptyDomain : Error {
    using Error::Error;
};

// Malformed problem description (JSON shape, missing fields, bad values).
struct SpecParseError : Error {
    using Error::Error;
};

// A requested exact quantity cannot be represented at any finite precision
// the implementation supports.
struct OutsideRepresentablePrecision : Error {
    using Error::Error;
};

} // namespace padlex

#endif
