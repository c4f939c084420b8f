#pragma once

#include <stdexcept>
#include <string>

namespace ghl {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define GHL_DEFINE_ERROR(NAME)                                           \
    class NAME : public Error {                                          \
    public:                                                              \
        explicit NAME(const std::string& what) : Error(#NAME ": " + what) {} \
    }

GHL_DEFINE_ERROR(InvalidPmf);
GHL_DEFINE_ERROR(SupportMismatch);
GHL_DEFINE_ERROR(DomainError);
GHL_DEFINE_ERROR(ZeroMarginal);
GHL_DEFINE_ERROR(EnsembleTooLarge);
GHL_DEFINE_ERROR(DimensionMismatch);
GHL_DEFINE_ERROR(ChannelPriorMismatch);
GHL_DEFINE_ERROR(NoiseNotCentered);
GHL_DEFINE_ERROR(GridOverflow);
GHL_DEFINE_ERROR(RowNotInCatalog);
GHL_DEFINE_ERROR(CapViolated);
GHL_DEFINE_ERROR(NotMonotone);
GHL_DEFINE_ERROR(NotCoherent);
GHL_DEFINE_ERROR(PreconditionFailed);
GHL_DEFINE_ERROR(NotNoiseChannel);
GHL_DEFINE_ERROR(NotInjective);
GHL_DEFINE_ERROR(PartitionMismatch);
GHL_DEFINE_ERROR(ModeUnsupported);
GHL_DEFINE_ERROR(GenerationFailed);
GHL_DEFINE_ERROR(IoError);
GHL_DEFINE_ERROR(ConfigError);
GHL_DEFINE_ERROR(MalformedCsv);

#undef GHL_DEFINE_ERROR

}  // namespace ghl
