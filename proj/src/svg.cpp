#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "sketch3d/error.hpp"
#include "sketch3d/sketch.hpp"
#include "sketch3d/text_util.hpp"

namespace sketch3d {

namespace pt = boost::property_tree;

namespace {

// SVG matrix(a b c d e f): x' = a x + c y + e, y' = b x + d y + f.
struct Affine {
    double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

    Vec2 apply(Vec2 p) const { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }
    // (*this) ∘ rhs: rhs is applied first.
    Affine then_inner(const Affine& r) const {
        return {a * r.a + c * r.b, b * r.a + d * r.b, a * r.c + c * r.d,
                b * r.c + d * r.d, a * r.e + c * r.f + e, b * r.e + d * r.f + f};
    }
    double width_scale() const { return std::sqrt(std::abs(a * d - b * c)); }
};

std::string_view local_name(std::string_view tag) {
    const auto colon = tag.find(':');
    return colon == std::string_view::npos ? tag : tag.substr(colon + 1);
}

class NumberLexer {
public:
    explicit NumberLexer(std::string_view s) : s_(s) {}

    void skip_separators() {
        while (pos_ < s_.size() && (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == ','))
            ++pos_;
    }
    bool done() {
        skip_separators();
        return pos_ >= s_.size();
    }
    bool at_number() {
        skip_separators();
        if (pos_ >= s_.size()) return false;
        const char ch = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '.';
    }
    char peek() {
        skip_separators();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    char take() { return s_[pos_++]; }

    // SVG number grammar: "1.5.5" is two numbers, "1-2" is two numbers.
    double number() {
        skip_separators();
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        };
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        digits();
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                digits();
            else
                pos_ = save;
        }
        double v = 0;
        if (!detail::parse_double(s_.substr(start, pos_ - start), v))
            throw ParseError("bad number near '" + std::string(s_.substr(start, 16)) + "'");
        return v;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

Affine parse_transform(std::string_view text) {
    Affine total;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == ',')) ++pos;
        if (pos >= text.size()) break;
        const std::size_t open = text.find('(', pos);
        const std::size_t close = text.find(')', pos);
        if (open == std::string_view::npos || close == std::string_view::npos || close < open)
            throw ParseError("malformed transform '" + std::string(text) + "'");
        const std::string_view name = detail::trim(text.substr(pos, open - pos));
        NumberLexer lex(text.substr(open + 1, close - open - 1));
        std::vector<double> args;
        while (!lex.done()) args.push_back(lex.number());
        Affine m;
        auto need = [&](std::size_t lo, std::size_t hi) {
            if (args.size() < lo || args.size() > hi)
                throw ParseError("transform " + std::string(name) + " has " + std::to_string(args.size()) + " arguments");
        };
        if (name == "translate") {
            need(1, 2);
            m.e = args[0];
            m.f = args.size() > 1 ? args[1] : 0.0;
        } else if (name == "scale") {
            need(1, 2);
            m.a = args[0];
            m.d = args.size() > 1 ? args[1] : args[0];
        } else if (name == "rotate") {
            if (args.size() != 1 && args.size() != 3) need(1, 1);
            const double t = args[0] * std::numbers::pi / 180.0;
            m = {std::cos(t), std::sin(t), -std::sin(t), std::cos(t), 0, 0};
            if (args.size() == 3) {
                const Affine to{1, 0, 0, 1, args[1], args[2]}, back{1, 0, 0, 1, -args[1], -args[2]};
                m = to.then_inner(m).then_inner(back);
            }
        } else if (name == "matrix") {
            need(6, 6);
            m = {args[0], args[1], args[2], args[3], args[4], args[5]};
        } else {
            throw ParseError("unsupported transform '" + std::string(name) + "'");
        }
        total = total.then_inner(m);
        pos = close + 1;
    }
    return total;
}

double parse_length(std::string_view s, double fallback) {
    s = detail::trim(s);
    std::size_t end = 0;
    while (end < s.size() && (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' || s[end] == '-' ||
                              s[end] == '+' || s[end] == 'e' || s[end] == 'E'))
        ++end;
    double v = 0;
    return detail::parse_double(s.substr(0, end), v) ? v : fallback;
}

std::optional<std::string> style_property(const std::string& style, std::string_view key) {
    for (std::string_view decl : detail::split(style, ';')) {
        const auto colon = decl.find(':');
        if (colon == std::string_view::npos) continue;
        if (detail::trim(decl.substr(0, colon)) == key) return std::string(detail::trim(decl.substr(colon + 1)));
    }
    return std::nullopt;
}

struct Context {
    Affine ctm;
    double stroke_width = 1.0;
};

class Reader {
public:
    Sketch sketch;

    void visit(const pt::ptree& node, const Context& parent) {
        for (const auto& [tag, child] : node) {
            if (tag == "<xmlattr>" || tag == "<xmlcomment>" || tag == "<xmltext>") continue;
            const std::string_view name = local_name(tag);
            Context ctx = parent;
            if (const auto attrs = child.get_child_optional("<xmlattr>")) {
                if (auto t = attrs->get_optional<std::string>("transform")) ctx.ctm = ctx.ctm.then_inner(parse_transform(*t));
                if (auto w = attrs->get_optional<std::string>("stroke-width")) ctx.stroke_width = parse_length(*w, ctx.stroke_width);
                if (auto st = attrs->get_optional<std::string>("style"))
                    if (auto w = style_property(*st, "stroke-width")) ctx.stroke_width = parse_length(*w, ctx.stroke_width);
            }
            if (name == "g" || name == "svg" || name == "a") {
                visit(child, ctx);
            } else if (name == "path") {
                path(child.get<std::string>("<xmlattr>.d", ""), ctx);
                ++element_;
            } else if (name == "line") {
                const pt::ptree at = child.get_child("<xmlattr>", pt::ptree{});
                begin(ctx);
                point({parse_length(at.get<std::string>("x1", "0"), 0), parse_length(at.get<std::string>("y1", "0"), 0)});
                point({parse_length(at.get<std::string>("x2", "0"), 0), parse_length(at.get<std::string>("y2", "0"), 0)});
                end();
                ++element_;
            } else if (name == "polyline" || name == "polygon") {
                const std::string points = child.get<std::string>("<xmlattr>.points", "");
                NumberLexer lex(points);
                begin(ctx);
                std::vector<double> xs;
                while (!lex.done()) xs.push_back(lex.number());
                if (xs.size() % 2 != 0) throw ParseError("odd coordinate count in " + std::string(name) + " " + index_label());
                for (std::size_t k = 0; k + 1 < xs.size(); k += 2) point({xs[k], xs[k + 1]});
                if (name == "polygon" && xs.size() >= 4) point({xs[0], xs[1]});
                end();
                ++element_;
            } else if (name == "rect" || name == "circle" || name == "ellipse" || name == "text" || name == "image" ||
                       name == "use") {
                throw ParseError("unsupported drawable <" + std::string(name) + "> at " + index_label());
            }
            // defs, title, metadata, desc, style, ... carry no strokes
        }
    }

private:
    std::size_t element_ = 0;
    Context ctx_;
    std::vector<Vec2> current_;

    std::string index_label() const { return "element " + std::to_string(element_); }

    void begin(const Context& ctx) {
        ctx_ = ctx;
        current_.clear();
    }
    void point(Vec2 user) { current_.push_back(ctx_.ctm.apply(user)); }
    void end() {
        if (current_.size() >= 2) {
            Stroke s;
            s.points = std::move(current_);
            s.width = ctx_.stroke_width * ctx_.ctm.width_scale();
            if (!(s.width > 0)) throw ParseError("non-positive stroke width at " + index_label());
            sketch.strokes.push_back(std::move(s));
        }
        current_.clear();
    }

    void path(const std::string& d, const Context& ctx) {
        begin(ctx);
        NumberLexer lex(d);
        Vec2 cur, start;
        bool open = false;
        char cmd = 0;
        while (!lex.done()) {
            if (!lex.at_number()) {
                cmd = lex.take();
                if (std::string_view("MmLlCcZz").find(cmd) == std::string_view::npos)
                    throw ParseError(std::string("unsupported path command '") + cmd + "' in " + index_label());
                if (cmd == 'Z' || cmd == 'z') {
                    if (open) {
                        if (!(current_.back() == ctx_.ctm.apply(start))) point(start);
                        end();
                        open = false;
                    }
                    cur = start;
                    continue;
                }
            } else if (cmd == 0 || cmd == 'Z' || cmd == 'z') {
                throw ParseError("path data must start with a command in " + index_label());
            }
            const bool rel = std::islower(static_cast<unsigned char>(cmd)) != 0;
            auto read_point = [&] {
                const double x = lex.number();
                const double y = lex.number();
                return rel ? cur + Vec2{x, y} : Vec2{x, y};
            };
            switch (cmd) {
                case 'M':
                case 'm': {
                    const Vec2 p = read_point();
                    if (open) end();
                    begin(ctx);
                    point(p);
                    open = true;
                    cur = start = p;
                    // Further pairs are implicit line-tos.
                    cmd = rel ? 'l' : 'L';
                    break;
                }
                case 'L':
                case 'l': {
                    const Vec2 p = read_point();
                    ensure_open(open, cur, start);
                    point(p);
                    cur = p;
                    break;
                }
                case 'C':
                case 'c': {
                    const Vec2 c1 = read_point();
                    const Vec2 c2 = read_point();
                    const Vec2 p = read_point();
                    ensure_open(open, cur, start);
                    flatten_cubic(ctx_.ctm.apply(cur), ctx_.ctm.apply(c1), ctx_.ctm.apply(c2), ctx_.ctm.apply(p),
                                  kBezierTolerance, current_);
                    cur = p;
                    break;
                }
            }
        }
        if (open) end();
    }

    // Drawing after Z without a new M starts a subpath at the close point.
    void ensure_open(bool& open, Vec2 cur, Vec2& start) {
        if (open) return;
        point(cur);
        start = cur;
        open = true;
    }
};

}  // namespace

void flatten_cubic(Vec2 p0, Vec2 p1, Vec2 p2, Vec2 p3, double tolerance, std::vector<Vec2>& out) {
    struct Piece {
        Vec2 a, b, c, d;
        int depth;
    };
    // The curve lies in the hull of its control points, so its distance to
    // the chord is at most the control points' distance to it.
    std::vector<Piece> stack{{p0, p1, p2, p3, 0}};
    while (!stack.empty()) {
        const Piece q = stack.back();
        stack.pop_back();
        const double dev = std::max(distance_to_segment(q.b, q.a, q.d), distance_to_segment(q.c, q.a, q.d));
        if (dev <= tolerance || q.depth >= 40) {
            out.push_back(q.d);
            continue;
        }
        const Vec2 ab = 0.5 * (q.a + q.b), bc = 0.5 * (q.b + q.c), cd = 0.5 * (q.c + q.d);
        const Vec2 abc = 0.5 * (ab + bc), bcd = 0.5 * (bc + cd);
        const Vec2 mid = 0.5 * (abc + bcd);
        // Right half pushed first so the left half is emitted first.
        stack.push_back({mid, bcd, cd, q.d, q.depth + 1});
        stack.push_back({q.a, ab, abc, mid, q.depth + 1});
    }
}

Sketch parse_svg_string(const std::string& text) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_xml(in, tree, pt::xml_parser::no_comments);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(std::string("malformed XML: ") + e.message(), e.line());
    }
    const pt::ptree* root = nullptr;
    for (const auto& [tag, child] : tree)
        if (local_name(tag) == "svg") root = &child;
    if (root == nullptr) throw ParseError("document has no <svg> root");

    Reader reader;
    const pt::ptree attrs = root->get_child("<xmlattr>", pt::ptree{});
    double w = parse_length(attrs.get<std::string>("width", ""), 0);
    double h = parse_length(attrs.get<std::string>("height", ""), 0);
    if ((w <= 0 || h <= 0) && attrs.count("viewBox")) {
        const std::string view_box = attrs.get<std::string>("viewBox");
        NumberLexer lex(view_box);
        double vb[4] = {0, 0, 0, 0};
        for (double& v : vb)
            if (!lex.done()) v = lex.number();
        w = vb[2];
        h = vb[3];
    }
    reader.sketch.width = w > 0 ? static_cast<std::size_t>(std::lround(w)) : 256;
    reader.sketch.height = h > 0 ? static_cast<std::size_t>(std::lround(h)) : 256;
    if (reader.sketch.width == 0) reader.sketch.width = 256;
    if (reader.sketch.height == 0) reader.sketch.height = 256;

    Context root_ctx;
    if (attrs.count("stroke-width")) root_ctx.stroke_width = parse_length(attrs.get<std::string>("stroke-width"), 1.0);
    reader.visit(*root, root_ctx);
    return std::move(reader.sketch);
}

Sketch parse_svg(const std::filesystem::path& path) { return parse_svg_string(detail::read_file(path)); }

std::string format_svg(const Sketch& sketch) {
    validate(sketch);
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    const std::string w = std::to_string(sketch.width), h = std::to_string(sketch.height);
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w + "\" height=\"" + h +
           "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
    for (const Stroke& s : sketch.strokes) {
        out += "  <polyline fill=\"none\" stroke=\"black\" stroke-linecap=\"round\" stroke-linejoin=\"round\" stroke-width=\"";
        out += detail::format_double(s.width);
        out += "\" points=\"";
        for (std::size_t k = 0; k < s.points.size(); ++k) {
            if (k) out += ' ';
            out += detail::format_double(s.points[k].x);
            out += ',';
            out += detail::format_double(s.points[k].y);
        }
        out += "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

void write_svg(const Sketch& sketch, const std::filesystem::path& path) {
    detail::write_file(path, format_svg(sketch));
}

}  // namespace sketch3d
