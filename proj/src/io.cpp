#include "masersim/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace masersim {

std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) raise(ErrorCode::Io, "cannot create directory " + path.parent_path().string());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) raise(ErrorCode::Io, "short write to " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) raise(ErrorCode::Io, "cannot rename " + tmp.string() + " to " + path.string());
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "T";
    for (const auto& l : traj.labels) {
        out += ',';
        out += l;
    }
    out += '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out += format_double(traj.times[i]);
        for (double v : traj.states[i]) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    atomic_write(path, trajectory_csv(traj));
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::Io, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        raise(ErrorCode::SchemaError, path.string() + ": empty trajectory file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    Trajectory traj;
    {
        std::stringstream header(line);
        std::string cell;
        bool first = true;
        while (std::getline(header, cell, ',')) {
            if (first) {
                if (cell != "T")
                    raise(ErrorCode::SchemaError,
                          path.string() + ": first trajectory column must be T");
                first = false;
            } else {
                traj.labels.push_back(cell);
            }
        }
        if (traj.labels.empty())
            raise(ErrorCode::SchemaError, path.string() + ": no component columns");
    }

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        const char* p = line.data();
        const char* end = p + line.size();
        while (p <= end) {
            double v;
            auto res = std::from_chars(p, end, v);
            if (res.ec != std::errc{})
                raise(ErrorCode::SchemaError,
                      path.string() + ":" + std::to_string(lineno) + ": bad number");
            row.push_back(v);
            if (res.ptr == end) break;
            if (*res.ptr != ',')
                raise(ErrorCode::SchemaError,
                      path.string() + ":" + std::to_string(lineno) + ": expected comma");
            p = res.ptr + 1;
        }
        if (row.size() != traj.labels.size() + 1)
            raise(ErrorCode::SchemaError, path.string() + ":" + std::to_string(lineno) +
                                              ": wrong column count");
        traj.times.push_back(row[0]);
        traj.states.emplace_back(row.begin() + 1, row.end());
    }
    if (traj.times.size() < 2)
        raise(ErrorCode::SchemaError, path.string() + ": trajectory has fewer than two samples");
    return traj;
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt_tick(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

} // namespace

std::string render_svg(const std::vector<SvgSeries>& series, const SvgOptions& opt) {
    const double ml = 70, mr = 160, mt = 40, mb = 50;
    const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double yv = s.y[i];
            if (opt.log_y && !(yv > 0)) continue;
            if (!std::isfinite(s.x[i]) || !std::isfinite(yv)) continue;
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = yv;
                first = false;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, yv);
                ymax = std::max(ymax, yv);
            }
        }
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    double lo = opt.log_y ? std::log10(ymin) : ymin;
    double hi = opt.log_y ? std::log10(ymax) : ymax;
    if (hi <= lo) hi = lo + 1;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) {
        double v = opt.log_y ? std::log10(y) : y;
        return mt + (1.0 - (v - lo) / (hi - lo)) * ph;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width
        << "\" height=\"" << opt.height << "\" viewBox=\"0 0 " << opt.width << ' '
        << opt.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << opt.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(opt.title)
        << "</text>\n";

    // axes + ticks
    svg << "<g stroke=\"#333\" stroke-width=\"1\">\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
        << "\" y2=\"" << mt + ph << "\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << mt + ph << "\"/>\n</g>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    const int nticks = 6;
    for (int i = 0; i <= nticks; ++i) {
        double fx = xmin + (xmax - xmin) * i / nticks;
        double gx = px(fx);
        svg << "<line x1=\"" << gx << "\" y1=\"" << mt + ph << "\" x2=\"" << gx
            << "\" y2=\"" << mt + ph + 4 << "\" stroke=\"#333\"/>"
            << "<text x=\"" << gx << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\">" << fmt_tick(fx) << "</text>\n";
        double fv = lo + (hi - lo) * i / nticks;
        double fy = opt.log_y ? std::pow(10.0, fv) : fv;
        double gy = py(fy);
        svg << "<line x1=\"" << ml - 4 << "\" y1=\"" << gy << "\" x2=\"" << ml
            << "\" y2=\"" << gy << "\" stroke=\"#333\"/>"
            << "<text x=\"" << ml - 8 << "\" y=\"" << gy + 4
            << "\" text-anchor=\"end\">" << fmt_tick(fy) << "</text>\n";
    }
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opt.height - 10
        << "\" text-anchor=\"middle\">" << xml_escape(opt.x_label) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << mt + ph / 2
        << ")\">" << xml_escape(opt.y_label) << "</text>\n</g>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double yv = s.y[i];
            if (opt.log_y && !(yv > 0)) continue;
            if (!std::isfinite(s.x[i]) || !std::isfinite(yv)) continue;
            svg << px(s.x[i]) << ',' << py(yv) << ' ';
        }
        svg << "\"/>\n";
        double ly = mt + 16.0 * static_cast<double>(si);
        svg << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly + 8 << "\" x2=\""
            << ml + pw + 34 << "\" y2=\"" << ly + 8 << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>"
            << "<text x=\"" << ml + pw + 40 << "\" y=\"" << ly + 12
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(s.label)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

void reject_unknown_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                         const std::string& context) {
    if (!obj.is_object())
        raise(ErrorCode::SchemaError, context + ": expected a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            raise(ErrorCode::SchemaError, context + ": unknown key '" + it.key() + "'");
    }
}

} // namespace masersim
