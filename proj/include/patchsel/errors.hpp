#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace patchsel {

/// Base class for all domain errors. Each error carries a stable
/// machine-readable name (used by the CLI, which prints the name on stderr
/// and exits with code 1) in addition to the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define PATCHSEL_ERROR(NAME)                                        \
    class NAME : public Error {                                     \
    public:                                                         \
        explicit NAME(const std::string& what) : Error(#NAME, what) {} \
    };

PATCHSEL_ERROR(DimensionMismatch)
PATCHSEL_ERROR(NonPositiveKappa)
PATCHSEL_ERROR(NotPositiveSemidefinite)
PATCHSEL_ERROR(InvalidStrategy)
PATCHSEL_ERROR(NoUniqueStationary)
PATCHSEL_ERROR(NoStationaryDistribution)
PATCHSEL_ERROR(DegenerateNoise)
PATCHSEL_ERROR(DegenerateStrategy)
PATCHSEL_ERROR(NonpersistentStrategy)
PATCHSEL_ERROR(NonPositiveInitial)
PATCHSEL_ERROR(UnstableStep)
PATCHSEL_ERROR(BurnInTooLong)
PATCHSEL_ERROR(IndexOutOfRange)
PATCHSEL_ERROR(InvalidConfig)
PATCHSEL_ERROR(SigmaNotPositiveDefinite)
PATCHSEL_ERROR(NoPersistentStrategy)
PATCHSEL_ERROR(NoViablePatch)
PATCHSEL_ERROR(UsageError)
PATCHSEL_ERROR(FileNotFound)
PATCHSEL_ERROR(ParseError)

#undef PATCHSEL_ERROR

}  // namespace patchsel
