#include "flexo/geom/boundary_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace flexo::geom {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::string cur;
    for (char ch : line) {
        if (ch == '#') break;
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) {
                toks.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) toks.push_back(cur);
    return toks;
}

// key=value attribute, returns true when the token carries the given key.
bool attr(const std::string& tok, const std::string& key, std::string& val) {
    if (tok.size() > key.size() + 1 && tok.compare(0, key.size(), key) == 0 && tok[key.size()] == '=') {
        val = tok.substr(key.size() + 1);
        return true;
    }
    return false;
}

struct PendingSegment {
    int degree = -1;
    std::vector<double> knots;
    std::vector<Vector2d> cps;
    std::vector<double> weights;
    std::string region;
    bool open = false;
};

}  // namespace

BoundaryFile parse_boundary_text(const std::string& text) {
    BoundaryFile out;
    PendingSegment pend;
    int line_no = 0;

    auto fail = [&](const std::string& msg) {
        throw std::runtime_error("boundary file, line " + std::to_string(line_no) + ": " + msg);
    };
    auto flush_segment = [&]() {
        if (!pend.open) return;
        if (out.chains.empty()) fail("segment outside of a chain");
        if (pend.degree < 1) fail("segment missing degree");
        if (pend.cps.empty()) fail("segment missing control points");
        out.chains.back().segments.push_back(
            {NurbsCurve2D(pend.degree, pend.knots, pend.cps, pend.weights), pend.region});
        pend = PendingSegment{};
    };

    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        ++line_no;
        const auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        if (kw == "chain") {
            flush_segment();
            out.chains.emplace_back();
        } else if (kw == "segment") {
            flush_segment();
            pend.open = true;
            std::string v;
            for (std::size_t k = 1; k < toks.size(); ++k)
                if (attr(toks[k], "region", v)) pend.region = v;
        } else if (kw == "degree") {
            if (!pend.open || toks.size() != 2) fail("bad degree line");
            pend.degree = std::stoi(toks[1]);
        } else if (kw == "knots") {
            if (!pend.open) fail("knots outside segment");
            for (std::size_t k = 1; k < toks.size(); ++k) pend.knots.push_back(std::stod(toks[k]));
        } else if (kw == "cp") {
            if (!pend.open || toks.size() != 4) fail("cp expects: cp x y w");
            pend.cps.emplace_back(std::stod(toks[1]), std::stod(toks[2]));
            pend.weights.push_back(std::stod(toks[3]));
        } else if (kw == "corner" || kw == "nocorner") {
            flush_segment();
            if (out.chains.empty()) fail("corner override outside chain");
            CornerOverride o;
            o.chain = static_cast<int>(out.chains.size()) - 1;
            o.is_corner = (kw == "corner");
            bool have_after = false;
            std::string v;
            for (std::size_t k = 1; k < toks.size(); ++k) {
                if (attr(toks[k], "after", v)) {
                    o.junction = std::stoi(v);
                    have_after = true;
                } else if (attr(toks[k], "name", v)) {
                    o.name = v;
                }
            }
            if (!have_after) fail("corner override missing after=<junction>");
            out.overrides.push_back(o);
        } else {
            fail("unknown keyword '" + kw + "'");
        }
    }
    flush_segment();
    if (out.chains.empty()) throw std::runtime_error("boundary file: no chains");
    return out;
}

BoundaryModel load_boundary_file(const std::string& path, double corner_angle_tol) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open boundary file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    const BoundaryFile bf = parse_boundary_text(ss.str());
    return BoundaryModel(bf.chains, corner_angle_tol, bf.overrides);
}

std::string serialize_boundary(const BoundaryModel& model) {
    std::ostringstream os;
    os.precision(17);
    for (int ci = 0; ci < model.num_chains(); ++ci) {
        os << "chain\n";
        for (const BoundarySegment& s : model.chain(ci).segments) {
            os << "segment";
            if (!s.region.empty()) os << " region=" << s.region;
            os << "\n  degree " << s.curve.degree() << "\n  knots";
            for (double k : s.curve.knots()) os << ' ' << k;
            os << "\n";
            for (std::size_t i = 0; i < s.curve.control().size(); ++i)
                os << "  cp " << s.curve.control()[i].x() << ' ' << s.curve.control()[i].y() << ' '
                   << s.curve.weights()[i] << "\n";
        }
    }
    return os.str();
}

}  // namespace flexo::geom
