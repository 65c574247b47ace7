#pragma once

#include <stdexcept>
#include <string>

namespace bianchi {

// Every failure raised by the library derives from this, tagged by a short kind name.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define BIANCHI_ERROR(Name)                                                   \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(#Name, what) {}        \
    };

BIANCHI_ERROR(InvalidRing)
BIANCHI_ERROR(ZeroPair)
BIANCHI_ERROR(NotInterior)
BIANCHI_ERROR(BoundExceeded)
BIANCHI_ERROR(DegenerateArrangement)
BIANCHI_ERROR(UnboundedStabilizer)
BIANCHI_ERROR(UnknownType)
BIANCHI_ERROR(OrbitInconsistency)
BIANCHI_ERROR(NotAComplex)
BIANCHI_ERROR(UnsupportedInclusion)
BIANCHI_ERROR(LiftFailure)
BIANCHI_ERROR(CosetUndecidable)
BIANCHI_ERROR(CycleConditionViolated)
BIANCHI_ERROR(NoConsistentExtension)
BIANCHI_ERROR(CheckFailed)
BIANCHI_ERROR(FormatError)

#undef BIANCHI_ERROR

}  // namespace bianchi
