#pragma once

#include <stdexcept>
#include <string>

namespace sforge {

/// Base of every error the library raises on purpose.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// numerics
class NoConvergence : public Error { using Error::Error; };
class NoSignChange : public Error { using Error::Error; };

// braidlib
class InvalidBraid : public Error { using Error::Error; };
class AmbiguousMatch : public Error { using Error::Error; };
class DegenerateCrossing : public Error { using Error::Error; };

// construct
class MixedResidues : public Error { using Error::Error; };
class UnequalComponents : public Error { using Error::Error; };
class OddExponent : public Error { using Error::Error; };
class NegativeExponent : public Error { using Error::Error; };

// certify
class ZeroAtCritical : public Error { using Error::Error; };
class Exhausted : public Error { using Error::Error; };

} // namespace sforge
