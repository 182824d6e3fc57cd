#include "csv.hpp"

#include "livingglobe/errors.hpp"

#include <charconv>
#include <cmath>

namespace livingglobe::detail {

CsvReader::CsvReader(std::string_view text) : text_(text)
{
    if (text_.starts_with("\xEF\xBB\xBF"))
        pos_ = 3;
}

std::optional<CsvRecord> CsvReader::next()
{
    while (pos_ < text_.size())
    {
        CsvRecord record;
        record.line = line_;
        std::string field;
        bool in_quotes = false;
        bool any_content = false;

        while (pos_ < text_.size())
        {
            const char c = text_[pos_];
            if (in_quotes)
            {
                if (c == '"')
                {
                    if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"')
                    {
                        field.push_back('"');
                        pos_ += 2;
                        continue;
                    }
                    in_quotes = false;
                    ++pos_;
                    continue;
                }
                if (c == '\n')
                    ++line_;
                field.push_back(c);
                ++pos_;
                continue;
            }
            if (c == '"')
            {
                in_quotes = true;
                any_content = true;
                ++pos_;
            }
            else if (c == ',')
            {
                record.fields.push_back(std::move(field));
                field.clear();
                any_content = true;
                ++pos_;
            }
            else if (c == '\r' || c == '\n')
            {
                if (c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n')
                    ++pos_;
                ++pos_;
                ++line_;
                break;
            }
            else
            {
                field.push_back(c);
                any_content = true;
                ++pos_;
            }
        }
        if (in_quotes)
            throw SchemaError("unterminated quoted field starting on line " + std::to_string(record.line));

        if (!any_content && field.empty())
            continue; // blank line
        record.fields.push_back(std::move(field));
        return record;
    }
    return std::nullopt;
}

std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

std::optional<double> parse_number(std::string_view field) noexcept
{
    field = trim(field);
    if (field.empty())
        return std::nullopt;
    if (field.front() == '+')
        field.remove_prefix(1);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value, std::chars_format::general);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value))
        return std::nullopt;
    return value;
}

} // namespace livingglobe::detail
