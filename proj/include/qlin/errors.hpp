#pragma once

#include <stdexcept>
#include <string>

namespace qlin {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define QLIN_DEFINE_ERROR(NAME)                              \
    struct NAME : Error {                                    \
        explicit NAME(const std::string& msg)                \
            : Error(std::string(#NAME) + ": " + msg) {}      \
    }

// field tower construction / arithmetic
QLIN_DEFINE_ERROR(NonPrimeP);
QLIN_DEFINE_ERROR(DegreeCapExceeded);
QLIN_DEFINE_ERROR(DivisionByZero);
QLIN_DEFINE_ERROR(TowerMismatch);
QLIN_DEFINE_ERROR(NotInTopField);
QLIN_DEFINE_ERROR(NonDividingDegrees);
QLIN_DEFINE_ERROR(CapExceeded);

// ordinary polynomials
QLIN_DEFINE_ERROR(BothZero);
QLIN_DEFINE_ERROR(NonSquare);
QLIN_DEFINE_ERROR(DeterminantCapExceeded);

// linearized polynomials
QLIN_DEFINE_ERROR(CoefficientsOutsideFq);

// transition machinery
QLIN_DEFINE_ERROR(InvariantViolation);
QLIN_DEFINE_ERROR(NotInFrakM);
QLIN_DEFINE_ERROR(WitnessNotFound);

// g_{n,q} layer
QLIN_DEFINE_ERROR(AuxFieldMissing);
QLIN_DEFINE_ERROR(FormNotApplicable);
QLIN_DEFINE_ERROR(ExtractionFailure);
QLIN_DEFINE_ERROR(InstanceInvariantViolation);
QLIN_DEFINE_ERROR(PredicateFailed);
QLIN_DEFINE_ERROR(UnknownId);

// cli / data
QLIN_DEFINE_ERROR(ManifestMissing);

#undef QLIN_DEFINE_ERROR

}  // namespace qlin
