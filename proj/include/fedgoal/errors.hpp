#pragma once

#include <stdexcept>
#include <string>

namespace fedgoal {

#define FEDGOAL_DEFINE_ERROR(Name)                                        \
    struct Name : std::runtime_error {                                    \
        explicit Name(const std::string &msg) : std::runtime_error(msg) {} \
    };

// data
FEDGOAL_DEFINE_ERROR(MissingColumn)
FEDGOAL_DEFINE_ERROR(UnparseableTimestamp)
FEDGOAL_DEFINE_ERROR(NonUniformSpacing)
FEDGOAL_DEFINE_ERROR(DuplicateTimestamp)
FEDGOAL_DEFINE_ERROR(NonFiniteValue)
FEDGOAL_DEFINE_ERROR(InvalidConfig)
FEDGOAL_DEFINE_ERROR(BoundaryOutOfRange)
FEDGOAL_DEFINE_ERROR(SeriesTooShort)

// partition
FEDGOAL_DEFINE_ERROR(TooManyPartitions)

// model
FEDGOAL_DEFINE_ERROR(DimensionMismatch)
FEDGOAL_DEFINE_ERROR(NonFiniteInput)
FEDGOAL_DEFINE_ERROR(InsufficientData)
FEDGOAL_DEFINE_ERROR(DivergedTraining)

// metrics
FEDGOAL_DEFINE_ERROR(LengthMismatch)
FEDGOAL_DEFINE_ERROR(EmptyInput)
FEDGOAL_DEFINE_ERROR(DegenerateReference)
FEDGOAL_DEFINE_ERROR(MissingReference)

// lp
FEDGOAL_DEFINE_ERROR(MalformedProgram)
FEDGOAL_DEFINE_ERROR(SimplexStall)

// aggregate
FEDGOAL_DEFINE_ERROR(MalformedLossMatrix)
FEDGOAL_DEFINE_ERROR(WeightSimplexViolation)
FEDGOAL_DEFINE_ERROR(HeterogeneousLagCounts)
FEDGOAL_DEFINE_ERROR(EmptyValidationSet)

// harness
FEDGOAL_DEFINE_ERROR(IoError)

#undef FEDGOAL_DEFINE_ERROR

} // namespace fedgoal
