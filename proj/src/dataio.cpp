#include "rulkit/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

#include "rulkit/errors.hpp"
#include "rulkit/io_util.hpp"

namespace rulkit {

namespace {

std::string trim(std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    while (!s.empty() && is_space(s.back())) s.pop_back();
    return s;
}

bool parse_int(const std::string& s, int& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

} // namespace

std::optional<int> find_failure_cycle(const std::vector<int>& cycles, const Vec& hi, double eta) {
    for (std::size_t i = 0; i < hi.size(); ++i)
        if (hi[i] <= eta) return cycles[i];
    return std::nullopt;
}

DegradationSeries load_capacity(const std::filesystem::path& path, double rated_ah, double eta) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset file: " + path.string());
    if (!(rated_ah > 0.0)) throw Error("load_capacity: rated_ah must be positive");

    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty file", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        std::string header = trim(line);
        std::erase_if(header, [](unsigned char c) { return std::isspace(c) != 0; });
        if (header != "cycle,capacity_ah")
            throw ParseError("expected header 'cycle,capacity_ah', got '" + line + "'", line_no);
    }

    std::vector<std::pair<int, double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("missing comma", line_no);
        int cycle = 0;
        double cap = 0.0;
        if (!parse_int(trim(line.substr(0, comma)), cycle))
            throw ParseError("bad cycle index '" + trim(line.substr(0, comma)) + "'", line_no);
        if (!parse_double(trim(line.substr(comma + 1)), cap))
            throw ParseError("bad capacity value '" + trim(line.substr(comma + 1)) + "'", line_no);
        rows.emplace_back(cycle, cap);
    }
    if (rows.empty()) throw ParseError("no data rows", line_no);

    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    DegradationSeries s;
    s.battery_id = path.stem().string();
    s.eta = eta;
    s.cycles.reserve(rows.size());
    s.hi.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const int expected = static_cast<int>(i) + 1;
        if (rows[i].first != expected) {
            if (i > 0 && rows[i].first == rows[i - 1].first)
                throw SchemaError("duplicate cycle index " + std::to_string(rows[i].first));
            throw SchemaError("cycle indices must form the contiguous sequence 1..n; got " +
                              std::to_string(rows[i].first) + " where " +
                              std::to_string(expected) + " was expected");
        }
        const double hi = 100.0 * rows[i].second / rated_ah;
        if (!(hi > 0.0) || hi > 120.0)
            throw SchemaError("health index " + fmt_g17(hi) + "% out of range (0,120] at cycle " +
                              std::to_string(rows[i].first));
        s.cycles.push_back(rows[i].first);
        s.hi.push_back(hi);
        s.capacity_ah.push_back(rows[i].second);
    }
    s.failure_cycle = find_failure_cycle(s.cycles, s.hi, eta);
    return s;
}

void save_capacity(const std::filesystem::path& path, const DegradationSeries& series,
                   double rated_ah) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path.string());
    out << "cycle,capacity_ah\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double cap = i < series.capacity_ah.size() ? series.capacity_ah[i]
                                                         : series.hi[i] * rated_ah / 100.0;
        out << series.cycles[i] << ',' << fmt_g17(cap) << '\n';
    }
}

} // namespace rulkit
