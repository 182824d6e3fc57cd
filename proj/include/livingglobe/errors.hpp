#pragma once

#include <stdexcept>
#include <string>

namespace livingglobe {

/// Base of every error thrown by the engine. `kind()` is the stable
/// machine name used in HTTP error bodies and CLI diagnostics.
class Error : public std::runtime_error
{
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind))
    {
    }

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define LIVINGGLOBE_ERROR(Name, kind_name)                                   \
    class Name : public Error                                                \
    {                                                                        \
    public:                                                                  \
        explicit Name(const std::string& message) : Error(kind_name, message) \
        {                                                                    \
        }                                                                    \
    }

LIVINGGLOBE_ERROR(SchemaError, "schema_error");
LIVINGGLOBE_ERROR(DatasetError, "dataset_error");
LIVINGGLOBE_ERROR(RangeError, "range_error");
LIVINGGLOBE_ERROR(ConfigError, "config_error");
LIVINGGLOBE_ERROR(NotFoundError, "not_found");
LIVINGGLOBE_ERROR(CapacityError, "capacity_error");
LIVINGGLOBE_ERROR(AtlasCorruptionError, "atlas_corruption");
LIVINGGLOBE_ERROR(ContractViolation, "contract_violation");
LIVINGGLOBE_ERROR(IoError, "io_error");

#undef LIVINGGLOBE_ERROR

} // namespace livingglobe
