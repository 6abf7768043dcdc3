#pragma once

#include <stdexcept>
#include <string>

namespace mto {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define MTO_DEFINE_ERROR(Name)                      \
    class Name : public Error {                     \
    public:                                         \
        using Error::Error;                         \
    }

// graph / access
MTO_DEFINE_ERROR(NodeNotFound);
MTO_DEFINE_ERROR(InvalidPair);
MTO_DEFINE_ERROR(BudgetExhausted);
MTO_DEFINE_ERROR(CapabilityUnavailable);
MTO_DEFINE_ERROR(EmptyGraph);

// rewiring
MTO_DEFINE_ERROR(EdgeAbsent);
MTO_DEFINE_ERROR(ProvenanceViolation);
MTO_DEFINE_ERROR(DecisionConflict);

// samplers
MTO_DEFINE_ERROR(IsolatedNode);
MTO_DEFINE_ERROR(ConvergenceTimeout);
MTO_DEFINE_ERROR(CoverageTimeout);

// estimation
MTO_DEFINE_ERROR(DegenerateSequence);
MTO_DEFINE_ERROR(SampleTooLarge);
MTO_DEFINE_ERROR(EmptySample);
MTO_DEFINE_ERROR(AttributeMissing);

// spectral / generators
MTO_DEFINE_ERROR(Disconnected);
MTO_DEFINE_ERROR(TooLarge);
MTO_DEFINE_ERROR(ComputeBudget);
MTO_DEFINE_ERROR(DomainError);
MTO_DEFINE_ERROR(InsufficientTrials);

#undef MTO_DEFINE_ERROR

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace mto
