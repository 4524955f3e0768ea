#include "render.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace twistlab::cli {

namespace {

using json = nlohmann::ordered_json;

std::string inline_value(const json& v)
{
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + inline_value(v[i]);
        return s + "]";
    }
    return v.dump();
}

bool is_table(const json& v)
{
    return v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_object(); });
}

void render_object(const json& j, std::size_t indent, std::ostringstream& os)
{
    const std::string pad(indent, ' ');
    for (const auto& [key, v] : j.items()) {
        if (v.is_object()) {
            os << pad << key << ":\n";
            render_object(v, indent + 2, os);
        } else if (is_table(v)) {
            os << pad << key << ":\n";
            std::vector<std::string> cols;
            for (const auto& [k, _] : v.front().items()) cols.push_back(k);
            std::vector<std::vector<std::string>> rows{cols};
            for (const auto& row : v) {
                std::vector<std::string> cells;
                for (const auto& c : cols) cells.push_back(row.contains(c) ? inline_value(row[c]) : "-");
                rows.push_back(std::move(cells));
            }
            std::vector<std::size_t> width(cols.size(), 0);
            for (const auto& r : rows)
                for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
            for (const auto& r : rows) {
                std::string line = pad + "  ";
                for (std::size_t c = 0; c < r.size(); ++c) {
                    line += r[c];
                    if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
                }
                os << line << "\n";
            }
        } else {
            os << pad << key << ": " << inline_value(v) << "\n";
        }
    }
}

} // namespace

std::string render_text(const nlohmann::ordered_json& j)
{
    std::ostringstream os;
    render_object(j, 0, os);
    return os.str();
}

} // namespace twistlab::cli
