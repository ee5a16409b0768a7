#include "json_util.hpp"

#include <fstream>
#include <sstream>

namespace tollsim::detail {

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

json parse_json(std::string_view text, std::string_view what)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // e.byte is 1-based and points one past the offending character.
        std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        offset = std::min(offset, text.size());
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i < offset; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(std::string(what) + ": line " + std::to_string(line) + ", column " + std::to_string(col) +
                         ": syntax error");
    }
}

std::string id_field(const json& obj, const char* key, const std::string& locus)
{
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(locus + ": missing field '" + key + "'");
    if (it->is_string())
        return it->get<std::string>();
    if (it->is_number_integer())
        return std::to_string(it->get<long long>());
    throw ParseError(locus + ": field '" + key + "' must be a string or integer id");
}

std::string dump(const json& doc)
{
    return doc.dump(2) + "\n";
}

}  // namespace tollsim::detail
