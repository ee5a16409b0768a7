#pragma once

// Internal helpers shared by the JSON readers.

#include "tollsim/types.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace tollsim::detail {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Parses JSON, translating syntax errors into ParseError with line:column.
json parse_json(std::string_view text, std::string_view what);

/// Typed field access with a record locus in the error message.
template <typename T>
T required(const json& obj, const char* key, const std::string& locus)
{
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(locus + ": missing field '" + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ParseError(locus + ": field '" + key + "' has wrong type");
    }
}

template <typename T>
T optional_field(const json& obj, const char* key, T fallback, const std::string& locus)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null())
        return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ParseError(locus + ": field '" + key + "' has wrong type");
    }
}

/// JSON ids may be strings or integers; both map to a string id.
std::string id_field(const json& obj, const char* key, const std::string& locus);

/// Deterministic dump used for every persisted JSON document.
std::string dump(const json& doc);

}  // namespace tollsim::detail
