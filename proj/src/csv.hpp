#pragma once

// Minimal RFC 4180 reader shared by the table and geography parsers.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace livingglobe::detail {

struct CsvRecord
{
    std::vector<std::string> fields;
    /// 1-based line on which the record starts.
    std::size_t line = 0;
};

class CsvReader
{
public:
    explicit CsvReader(std::string_view text);

    /// Next non-blank record, or nullopt at end of input. Throws SchemaError
    /// on an unterminated quoted field.
    std::optional<CsvRecord> next();

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

std::string_view trim(std::string_view s) noexcept;

/// Strict decimal parse of a whole field; nullopt for anything else,
/// including inf/nan.
std::optional<double> parse_number(std::string_view field) noexcept;

} // namespace livingglobe::detail
