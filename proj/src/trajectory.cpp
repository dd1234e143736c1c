#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "sandlab/error.hpp"
#include "sandlab/toolkit_io.hpp"

namespace sandlab {

using ojson = nlohmann::ordered_json;

namespace {

ojson height_json(Height h) {
    if (h.is_finite()) return h.raw();
    return h.to_string();
}

Height json_height(const ojson& j, std::size_t line) {
    if (j.is_number_integer()) {
        const auto v = j.get<std::int64_t>();
        if (v < Height::kMinFinite || v > Height::kMaxFinite) throw ParseError(line, 1, "height out of range");
        return Height(v);
    }
    if (j.is_string()) {
        if (const auto h = Height::parse(j.get<std::string>())) return *h;
    }
    throw ParseError(line, 1, "invalid height " + j.dump());
}

}  // namespace

std::string trajectory_line(const OrbitRecord& rec) {
    const Configuration& x = rec.config;
    if (x.dim() != 1) throw DimensionError("trajectories are written for dim-1 configurations");
    ojson j;
    j["step"] = rec.step;
    if (x.is_periodic()) {
        ojson cells = ojson::array();
        for (const Height& h : x.cells()) cells.push_back(height_json(h));
        j["period"] = std::move(cells);
        return j.dump();
    }
    j["origin"] = x.origin();
    j["left"] = x.left_bg().to_string();
    j["right"] = x.right_bg().to_string();
    ojson core = ojson::array();
    for (const Height& h : x.cells()) core.push_back(height_json(h));
    j["core"] = std::move(core);
    return j.dump();
}

std::string write_trajectory(const std::vector<OrbitRecord>& records) {
    std::string s;
    for (const auto& rec : records) s += trajectory_line(rec) + "\n";
    return s;
}

std::vector<OrbitRecord> read_trajectory(std::string_view text) {
    std::vector<OrbitRecord> out;
    std::size_t line_no = 0, start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        ojson j;
        try {
            j = ojson::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(line_no, e.byte == 0 ? 1 : e.byte, "invalid JSON record");
        }
        if (!j.is_object() || !j.contains("step") || !j["step"].is_number_integer()) {
            throw ParseError(line_no, 1, "record needs an integer 'step'");
        }
        OrbitRecord rec;
        rec.step = j["step"].get<std::int64_t>();
        auto heights = [&](const ojson& arr) {
            if (!arr.is_array()) throw ParseError(line_no, 1, "expected an array of heights");
            std::vector<Height> hs;
            for (const auto& v : arr) hs.push_back(json_height(v, line_no));
            return hs;
        };
        if (j.contains("period")) {
            auto cells = heights(j["period"]);
            if (cells.empty()) throw ParseError(line_no, 1, "empty period");
            rec.config = Configuration::periodic(std::move(cells));
        } else {
            for (const char* key : {"origin", "left", "right", "core"}) {
                if (!j.contains(key)) throw ParseError(line_no, 1, std::string("record needs '") + key + "'");
            }
            if (!j["origin"].is_number_integer()) throw ParseError(line_no, 1, "'origin' must be an integer");
            rec.config = Configuration::line(json_height(j["left"], line_no), json_height(j["right"], line_no),
                                             j["origin"].get<std::int64_t>(), heights(j["core"]));
        }
        out.push_back(std::move(rec));
    }
    return out;
}

namespace {

struct Frame {
    std::int64_t lo = 0, hi = 0, vlo = 0, vhi = 0;
};

Frame frame_of(const std::vector<OrbitRecord>& records, const RenderOptions& opts) {
    if (records.empty()) throw InvalidArgument("nothing to render");
    std::int64_t lo = 0, hi = 0;
    bool any = false;
    std::optional<std::int64_t> mn, mx;
    for (const auto& rec : records) {
        const Configuration& x = rec.config;
        if (x.dim() != 1) throw DimensionError("rendering is implemented for dim-1 configurations");
        std::int64_t a = 0, b = 0;
        if (x.is_periodic()) {
            b = static_cast<std::int64_t>(x.period()) - 1;
        } else if (!x.cells().empty()) {
            a = x.origin();
            b = x.origin() + static_cast<std::int64_t>(x.core_width()) - 1;
        }
        lo = any ? std::min(lo, a) : a;
        hi = any ? std::max(hi, b) : b;
        any = true;
        if (const auto r = x.finite_range()) {
            mn = mn ? std::min(*mn, r->first) : r->first;
            mx = mx ? std::max(*mx, r->second) : r->second;
        }
    }
    Frame f;
    f.lo = lo - opts.margin;
    f.hi = hi + opts.margin;
    f.vlo = opts.vlo.value_or(mn ? *mn - 1 : -1);
    f.vhi = opts.vhi.value_or(mx ? *mx : 1);
    if (f.vhi < f.vlo) throw InvalidArgument("empty vertical window");
    return f;
}

bool filled(const Configuration& x, std::int64_t i, std::int64_t k) { return x.at(i) >= Height(k); }

}  // namespace

std::string render_ascii(const std::vector<OrbitRecord>& records, const RenderOptions& opts) {
    const Frame f = frame_of(records, opts);
    const std::size_t label = std::max(std::to_string(f.vlo).size(), std::to_string(f.vhi).size());
    std::ostringstream os;
    for (std::size_t n = 0; n < records.size(); ++n) {
        if (n) os << '\n';
        os << "step " << records[n].step << '\n';
        for (std::int64_t k = f.vhi; k >= f.vlo; --k) {
            const std::string num = std::to_string(k);
            os << std::string(label - num.size(), ' ') << num << " |";
            for (std::int64_t i = f.lo; i <= f.hi; ++i) os << (filled(records[n].config, i, k) ? '#' : '.');
            os << '\n';
        }
    }
    return os.str();
}

std::string render_svg(const std::vector<OrbitRecord>& records, const RenderOptions& opts) {
    const Frame f = frame_of(records, opts);
    const int c = opts.cell;
    const auto cols = f.hi - f.lo + 1;
    const auto rows = f.vhi - f.vlo + 1;
    const auto frame_w = (cols + 1) * c;
    const auto top = 2 * c;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << frame_w * static_cast<std::int64_t>(records.size())
       << "\" height=\"" << rows * c + top << "\">\n";
    for (std::size_t n = 0; n < records.size(); ++n) {
        const auto x0 = static_cast<std::int64_t>(n) * frame_w;
        os << "<text x=\"" << x0 << "\" y=\"" << c << "\" font-size=\"" << c << "\">step " << records[n].step
           << "</text>\n";
        os << "<rect x=\"" << x0 << "\" y=\"" << top << "\" width=\"" << cols * c << "\" height=\"" << rows * c
           << "\" fill=\"none\" stroke=\"#999\"/>\n";
        for (std::int64_t i = f.lo; i <= f.hi; ++i) {
            for (std::int64_t k = f.vhi; k >= f.vlo; --k) {
                if (!filled(records[n].config, i, k)) continue;
                os << "<rect x=\"" << x0 + (i - f.lo) * c << "\" y=\"" << top + (f.vhi - k) * c << "\" width=\"" << c
                   << "\" height=\"" << c << "\" fill=\"#c8a060\"/>\n";
            }
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace sandlab
