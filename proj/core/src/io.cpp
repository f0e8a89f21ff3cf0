#include "csf/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace csf::io {

using nlohmann::json;

SceneError::SceneError(const std::string& message, std::size_t line, std::size_t column, std::string pointer)
    : ConfigError(line == 0 ? message
                            : "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line), column_(column), pointer_(std::move(pointer)) {}

namespace {

struct LineColumn {
    std::size_t line{0};
    std::size_t column{0};
};

LineColumn line_column(std::string_view text, std::size_t offset) {
    LineColumn lc{1, 1};
    offset = std::min(offset, text.size());
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++lc.line;
            lc.column = 1;
        } else {
            ++lc.column;
        }
    }
    return lc;
}

/// Forward iterator that remembers the last character handed to the lexer.
struct TrackingIterator {
    using iterator_category = std::forward_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    const char* p{nullptr};
    const char** last{nullptr};

    reference operator*() const {
        *last = p;
        return *p;
    }
    TrackingIterator& operator++() {
        ++p;
        return *this;
    }
    TrackingIterator operator++(int) {
        TrackingIterator old = *this;
        ++p;
        return old;
    }
    bool operator==(const TrackingIterator& o) const { return p == o.p; }
    bool operator!=(const TrackingIterator& o) const { return p != o.p; }
};

std::string escape_pointer_token(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') {
            out += "~0";
        } else if (c == '/') {
            out += "~1";
        } else {
            out += c;
        }
    }
    return out;
}

/// Byte offset of every key and array element, keyed by JSON pointer.
class Locator : public nlohmann::json_sax<json> {
public:
    Locator(const char* begin, const char** last) : begin_(begin), last_(last) {}

    std::map<std::string, std::size_t> where;

    bool null() override { return scalar(); }
    bool boolean(bool) override { return scalar(); }
    bool number_integer(number_integer_t) override { return scalar(); }
    bool number_unsigned(number_unsigned_t) override { return scalar(); }
    bool number_float(number_float_t, const string_t&) override { return scalar(); }
    bool string(string_t&) override { return scalar(); }
    bool binary(binary_t&) override { return scalar(); }
    bool start_object(std::size_t) override {
        const std::string path = open_value();
        stack_.push_back(Level{false, 0, {}, path});
        return true;
    }
    bool key(string_t& k) override {
        stack_.back().key = k;
        where.emplace(here(), offset() + 1 >= k.size() + 2 ? offset() + 1 - (k.size() + 2) : 0);
        return true;
    }
    bool end_object() override {
        stack_.pop_back();
        return true;
    }
    bool start_array(std::size_t) override {
        const std::string path = open_value();
        stack_.push_back(Level{true, 0, {}, path});
        return true;
    }
    bool end_array() override {
        stack_.pop_back();
        return true;
    }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

private:
    struct Level {
        bool array;
        std::size_t index;
        std::string key;
        std::string path;
    };

    std::size_t offset() const { return static_cast<std::size_t>(*last_ - begin_); }

    std::string here() const {
        if (stack_.empty()) return {};
        const Level& l = stack_.back();
        return l.path + "/" + (l.array ? std::to_string(l.index) : escape_pointer_token(l.key));
    }

    std::string open_value() {
        const std::string path = here();
        where.emplace(path, offset());
        if (!stack_.empty() && stack_.back().array) ++stack_.back().index;
        return path;
    }

    bool scalar() {
        open_value();
        return true;
    }

    const char* begin_;
    const char** last_;
    std::vector<Level> stack_;
};

/// Walks one JSON object, rejecting keys that were never asked for.
class Reader {
public:
    Reader(const json& j, std::string path, const std::map<std::string, std::size_t>& where, std::string_view text)
        : j_(j), path_(std::move(path)), where_(where), text_(text) {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
        const auto it = where_.find(pointer);
        std::string what = message;
        if (!pointer.empty()) what = pointer + ": " + message;
        if (it == where_.end()) throw SceneError(what, 0, 0, pointer);
        const LineColumn lc = line_column(text_, it->second);
        throw SceneError(what, lc.line, lc.column, pointer);
    }

    std::string child(const std::string& key) const { return path_ + "/" + escape_pointer_token(key); }

    const json* find(const std::string& key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    double number(const std::string& key, double fallback) {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_number()) fail(child(key), "expected a number");
        const double x = v->get<double>();
        if (!std::isfinite(x)) fail(child(key), "expected a finite number");
        return x;
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_number_unsigned()) fail(child(key), "expected a non-negative integer");
        return v->get<std::uint64_t>();
    }

    bool boolean(const std::string& key, bool fallback) {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_boolean()) fail(child(key), "expected true or false");
        return v->get<bool>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_string()) fail(child(key), "expected a string");
        return v->get<std::string>();
    }

    const json& required(const std::string& key) {
        const json* v = find(key);
        if (!v) fail(path_, "missing required key '" + key + "'");
        return *v;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.contains(it.key())) fail(child(it.key()), "unknown key '" + it.key() + "'");
        }
    }

    const std::string& path() const { return path_; }
    const std::map<std::string, std::size_t>& where() const { return where_; }
    std::string_view text() const { return text_; }

private:
    const json& j_;
    std::string path_;
    const std::map<std::string, std::size_t>& where_;
    std::string_view text_;
    std::set<std::string> seen_;
};

void read_initial(Reader& r, InitialCurveSpec& spec) {
    spec.generator = r.string("generator", "");
    if (spec.generator.empty()) r.fail(r.path(), "missing required key 'generator'");
    const auto& names = generator_names();
    if (std::find(names.begin(), names.end(), spec.generator) == names.end())
        r.fail(r.child("generator"), "unknown generator '" + spec.generator + "'");
    spec.n = static_cast<std::size_t>(r.unsigned_integer("n", spec.n));
    if (spec.n < 3) r.fail(r.child("n"), "n must be at least 3");
    spec.angle_a = r.number("angle_a", spec.angle_a);
    spec.angle_b = r.number("angle_b", spec.angle_b);
    spec.seed = r.unsigned_integer("seed", spec.seed);
    if (const json* p = r.find("params")) {
        Reader pr(*p, r.child("params"), r.where(), r.text());
        for (const auto& [key, value] : generator_defaults(spec.generator)) {
            const double x = pr.number(key, value);
            if (pr.find(key)) spec.params[key] = x;
        }
        pr.finish();
    }
    if (const json* p = r.find("points")) {
        const std::string path = r.child("points");
        if (!p->is_array()) r.fail(path, "expected an array of [x, y] pairs");
        for (std::size_t i = 0; i < p->size(); ++i) {
            const json& q = (*p)[i];
            const std::string qp = path + "/" + std::to_string(i);
            if (!q.is_array() || q.size() != 2 || !q[0].is_number() || !q[1].is_number())
                r.fail(qp, "expected [x, y]");
            spec.points.push_back(Vec2{q[0].get<double>(), q[1].get<double>()});
        }
    }
    r.finish();
}

void read_flow(Reader& r, FlowConfig& flow) {
    flow.dt = r.number("dt", flow.dt);
    if (!(flow.dt > 0.0)) r.fail(r.child("dt"), "dt must be positive");
    flow.t_end = r.number("t_end", flow.t_end);
    if (!(flow.t_end >= 0.0)) r.fail(r.child("t_end"), "t_end must be non-negative");
    flow.n_nodes = static_cast<std::size_t>(r.unsigned_integer("n_nodes", flow.n_nodes));
    flow.pin_radius = r.number("pin_radius", flow.t_end + 6.0);
    const std::string scheme = r.string("scheme", "semi_implicit");
    if (scheme == "semi_implicit") {
        flow.scheme = Scheme::semi_implicit;
    } else if (scheme == "explicit") {
        flow.scheme = Scheme::explicit_euler;
    } else {
        r.fail(r.child("scheme"), "scheme must be 'semi_implicit' or 'explicit'");
    }
    flow.resample_every = static_cast<std::size_t>(r.unsigned_integer("resample_every", flow.resample_every));
    flow.smoothing_step = r.boolean("smoothing_step", flow.smoothing_step);
    if (const json* p = r.find("record_times")) {
        const std::string path = r.child("record_times");
        if (!p->is_array()) r.fail(path, "expected an array of times");
        for (std::size_t i = 0; i < p->size(); ++i) {
            const json& q = (*p)[i];
            const std::string qp = path + "/" + std::to_string(i);
            if (!q.is_number()) r.fail(qp, "expected a number");
            const double t = q.get<double>();
            if (!(t >= 0.0) || t > flow.t_end) r.fail(qp, "record time outside [0, t_end]");
            flow.record_times.push_back(t);
        }
    }
    const double every = r.number("record_every", 0.0);
    if (every < 0.0) r.fail(r.child("record_every"), "record_every must be positive");
    if (every > 0.0) {
        const auto count = static_cast<std::size_t>(std::floor(flow.t_end / every + 1e-9));
        for (std::size_t k = 1; k <= count; ++k) flow.record_times.push_back(std::min(every * k, flow.t_end));
    }
    std::sort(flow.record_times.begin(), flow.record_times.end());
    flow.record_times.erase(std::unique(flow.record_times.begin(), flow.record_times.end()),
                            flow.record_times.end());
    r.finish();
}

void read_checks(const json& j, const std::string& path, Reader& parent, Scene& scene) {
    const auto& known = check_ids();
    if (j.is_string()) {
        if (j.get<std::string>() != "all") parent.fail(path, "expected \"all\" or an array of check ids");
        scene.checks = known;
        return;
    }
    if (!j.is_array()) parent.fail(path, "expected \"all\" or an array of check ids");
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& c = j[i];
        const std::string cp = path + "/" + std::to_string(i);
        std::string id;
        if (c.is_string()) {
            id = c.get<std::string>();
        } else if (c.is_object()) {
            Reader cr(c, cp, parent.where(), parent.text());
            id = cr.string("id", "");
            if (const json* tol = cr.find("tolerance")) {
                if (!tol->is_number() || !(tol->get<double>() >= 0.0))
                    cr.fail(cr.child("tolerance"), "expected a non-negative number");
                scene.verify.tolerance_overrides[id] = tol->get<double>();
            }
            cr.finish();
        } else {
            parent.fail(cp, "expected a check id or {\"id\", \"tolerance\"}");
        }
        if (std::find(known.begin(), known.end(), id) == known.end()) parent.fail(cp, "unknown check '" + id + "'");
        if (std::find(scene.checks.begin(), scene.checks.end(), id) != scene.checks.end())
            parent.fail(cp, "duplicate check '" + id + "'");
        scene.checks.push_back(id);
    }
}

void read_verify(Reader& r, VerifyOptions& v) {
    v.grid_side = static_cast<std::size_t>(r.unsigned_integer("grid_side", v.grid_side));
    if (v.grid_side < 2) r.fail(r.child("grid_side"), "grid_side must be at least 2");
    v.window_steps = static_cast<std::size_t>(r.unsigned_integer("window_steps", v.window_steps));
    if (v.window_steps < 33) r.fail(r.child("window_steps"), "window_steps must be at least 33");
    v.window_dt_factor = r.number("window_dt_factor", v.window_dt_factor);
    if (!(v.window_dt_factor > 0.0 && v.window_dt_factor <= 0.25))
        r.fail(r.child("window_dt_factor"), "window_dt_factor must lie in (0, 0.25]");
    if (r.find("window_start")) v.window_start = r.number("window_start", 0.0);
    if (const json* s = r.find("slack")) {
        Reader sr(*s, r.child("slack"), r.where(), r.text());
        v.slack.relative = sr.number("relative", v.slack.relative);
        v.slack.c1 = sr.number("c1", v.slack.c1);
        v.slack.c2 = sr.number("c2", v.slack.c2);
        v.slack.c3 = sr.number("c3", v.slack.c3);
        sr.finish();
    }
    r.finish();
}

void read_outputs(Reader& r, OutputOptions& o) {
    o.directory = r.string("directory", o.directory);
    if (const json* f = r.find("formats")) {
        const std::string path = r.child("formats");
        if (!f->is_array()) r.fail(path, "expected an array of formats");
        o.csv = o.svg = o.json = false;
        for (std::size_t i = 0; i < f->size(); ++i) {
            const json& q = (*f)[i];
            const std::string name = q.is_string() ? q.get<std::string>() : std::string();
            if (name == "csv") {
                o.csv = true;
            } else if (name == "svg") {
                o.svg = true;
            } else if (name == "json") {
                o.json = true;
            } else {
                r.fail(path + "/" + std::to_string(i), "format must be 'csv', 'svg' or 'json'");
            }
        }
    }
    r.finish();
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    return j.get<double>();
}

const char* scheme_name(Scheme s) { return s == Scheme::explicit_euler ? "explicit" : "semi_implicit"; }

void put_row(std::ostream& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out << ',';
        out << format_number(v);
        first = false;
    }
    out << '\n';
}

}  // namespace

Scene parse_scene(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
        const LineColumn lc = line_column(text, byte);
        std::string message = e.what();
        const auto colon = message.find("syntax error");
        if (colon != std::string::npos) message = message.substr(colon);
        throw SceneError(message, lc.line, lc.column);
    }
    const char* last = text.data();
    Locator locator(text.data(), &last);
    TrackingIterator first{text.data(), &last};
    TrackingIterator end{text.data() + text.size(), &last};
    json::sax_parse(first, end, &locator);

    Scene scene;
    Reader r(root, "", locator.where, text);
    const json& version = r.required("version");
    if (!version.is_number_integer() || version.get<long long>() != 1) r.fail("/version", "version must be 1");
    scene.name = r.string("name", "");
    {
        Reader ir(r.required("initial"), "/initial", locator.where, text);
        read_initial(ir, scene.initial);
    }
    if (const json* f = r.find("flow")) {
        Reader fr(*f, "/flow", locator.where, text);
        read_flow(fr, scene.flow);
    } else {
        scene.flow.pin_radius = scene.flow.t_end + 6.0;
    }
    scene.initial.pin_radius = scene.flow.pin_radius;
    if (const json* c = r.find("checks")) read_checks(*c, "/checks", r, scene);
    if (const json* v = r.find("verify")) {
        Reader vr(*v, "/verify", locator.where, text);
        read_verify(vr, scene.verify);
    }
    if (const json* o = r.find("outputs")) {
        Reader orr(*o, "/outputs", locator.where, text);
        read_outputs(orr, scene.outputs);
    }
    r.finish();
    return scene;
}

Scene load_scene(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open scene file " + path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_scene(text);
}

std::string scene_json(const Scene& scene) {
    json j;
    j["version"] = scene.version;
    j["name"] = scene.name;
    json init;
    init["generator"] = scene.initial.generator;
    init["n"] = scene.initial.n;
    init["angle_a"] = scene.initial.angle_a;
    init["angle_b"] = scene.initial.angle_b;
    init["seed"] = scene.initial.seed;
    json params = json::object();
    for (const auto& [k, v] : generator_defaults(scene.initial.generator)) {
        const auto it = scene.initial.params.find(k);
        params[k] = it == scene.initial.params.end() ? v : it->second;
    }
    init["params"] = params;
    if (!scene.initial.points.empty()) {
        json pts = json::array();
        for (const Vec2& p : scene.initial.points) pts.push_back({p.x, p.y});
        init["points"] = pts;
    }
    j["initial"] = init;
    const FlowConfig& f = scene.flow;
    j["flow"] = {{"dt", f.dt},
                 {"t_end", f.t_end},
                 {"n_nodes", f.n_nodes},
                 {"pin_radius", f.pin_radius},
                 {"scheme", scheme_name(f.scheme)},
                 {"resample_every", f.resample_every},
                 {"smoothing_step", f.smoothing_step},
                 {"record_times", f.record_times}};
    json checks = json::array();
    for (const std::string& id : scene.checks) {
        const auto it = scene.verify.tolerance_overrides.find(id);
        if (it == scene.verify.tolerance_overrides.end()) {
            checks.push_back(id);
        } else {
            checks.push_back({{"id", id}, {"tolerance", it->second}});
        }
    }
    j["checks"] = checks;
    const VerifyOptions& v = scene.verify;
    j["verify"] = {{"grid_side", v.grid_side},
                   {"window_steps", v.window_steps},
                   {"window_dt_factor", v.window_dt_factor},
                   {"slack", {{"relative", v.slack.relative}, {"c1", v.slack.c1}, {"c2", v.slack.c2}, {"c3", v.slack.c3}}}};
    if (v.window_start) j["verify"]["window_start"] = *v.window_start;
    json formats = json::array();
    if (scene.outputs.csv) formats.push_back("csv");
    if (scene.outputs.svg) formats.push_back("svg");
    if (scene.outputs.json) formats.push_back("json");
    j["outputs"] = {{"directory", scene.outputs.directory}, {"formats", formats}};
    return j.dump(2);
}

std::string scene_hash(const Scene& scene) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : scene_json(scene)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

Scene refined(const Scene& scene, unsigned level) {
    Scene out = scene;
    const std::size_t factor = std::size_t{1} << level;
    out.initial.n = (scene.initial.n - 1) * factor + 1;
    if (scene.flow.n_nodes != 0) out.flow.n_nodes = (scene.flow.n_nodes - 1) * factor + 1;
    const double dt_factor = scene.flow.scheme == Scheme::explicit_euler ? double(factor * factor) : double(factor);
    out.flow.dt = scene.flow.dt / dt_factor;
    out.flow.resample_every = scene.flow.resample_every * static_cast<std::size_t>(dt_factor);
    return out;
}

PlanarCurve initial_curve(const Scene& scene) { return build_initial_curve(scene.initial); }

FlowTrace simulate(const Scene& scene) { return run(initial_curve(scene), scene.flow, scene_hash(scene)); }

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_trace_csv(std::ostream& out, const FlowTrace& trace) {
    out << kTraceHeader << '\n';
    for (const Snapshot& s : trace.snapshots) {
        const auto pts = s.curve.points();
        const auto params = s.curve.params();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            out << format_number(s.t) << ',' << i << ',';
            put_row(out, {params[i], pts[i].x, pts[i].y, s.lift.psi[i], s.curvature.kappa[i], s.curvature.arclengths[i]});
        }
    }
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader) throw ConfigError("trace CSV header mismatch");
    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        TraceRow r;
        char comma = 0;
        ls >> r.t >> comma >> r.node_index >> comma >> r.u >> comma >> r.x >> comma >> r.y >> comma >> r.psi >> comma >>
            r.kappa >> comma >> r.s;
        if (!ls) throw ConfigError("malformed trace CSV row: " + line);
        rows.push_back(r);
    }
    return rows;
}

std::string svg_frame(const Snapshot& snapshot, double radius) {
    const double size = 800.0;
    const double scale = size / (2.0 * radius);
    const auto X = [&](double x) { return (x + radius) * scale; };
    const auto Y = [&](double y) { return (radius - y) * scale; };
    char buf[128];
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (const auto& ends = snapshot.curve.ends()) {
        for (double angle : {ends->angle_a, ends->angle_b}) {
            const Vec2 d = unit_from_angle(angle);
            std::snprintf(buf, sizeof buf, "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" ", X(0.0), Y(0.0),
                          X(2.0 * radius * d.x), Y(2.0 * radius * d.y));
            out << buf << "stroke=\"#999\" stroke-dasharray=\"6 4\" stroke-width=\"1\"/>\n";
        }
    }
    out << "<path fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" d=\"";
    const auto pts = snapshot.curve.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.3f %.3f", i == 0 ? "M" : " L", X(pts[i].x), Y(pts[i].y));
        out << buf;
    }
    if (snapshot.curve.is_closed()) out << " Z";
    out << "\"/>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"10\" y=\"24\" font-family=\"monospace\" font-size=\"16\">t = %.6g</text>\n",
                  snapshot.t);
    out << buf << "</svg>\n";
    return out.str();
}

std::string report_json(const std::vector<CheckReport>& reports) {
    json arr = json::array();
    for (const CheckReport& r : reports) {
        json j;
        j["check_id"] = r.check_id;
        j["status"] = to_string(r.status);
        j["max_violation"] = number_or_null(r.max_violation);
        j["tolerance"] = number_or_null(r.tolerance);
        if (r.witness) {
            const Witness& w = *r.witness;
            json wj;
            wj["t"] = w.t;
            wj["v"] = w.v ? json(*w.v) : json(nullptr);
            wj["w"] = w.w ? json(*w.w) : json(nullptr);
            wj["node"] = w.node ? json(*w.node) : json(nullptr);
            wj["psi"] = w.psi ? number_or_null(*w.psi) : json(nullptr);
            j["witness"] = wj;
        } else {
            j["witness"] = nullptr;
        }
        j["notes"] = r.notes;
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

std::vector<CheckReport> parse_report_json(std::string_view text) {
    std::vector<CheckReport> out;
    try {
        const json arr = json::parse(text.begin(), text.end());
        if (!arr.is_array()) throw ConfigError("report JSON must be an array");
        for (const json& j : arr) {
            CheckReport r;
            r.check_id = j.at("check_id").get<std::string>();
            const auto status = parse_status(j.at("status").get<std::string>());
            if (!status) throw ConfigError("unknown status in report for " + r.check_id);
            r.status = *status;
            r.max_violation = number_from(j.at("max_violation"));
            r.tolerance = number_from(j.at("tolerance"));
            const json& wj = j.at("witness");
            if (!wj.is_null()) {
                Witness w;
                w.t = wj.at("t").get<double>();
                if (!wj.at("v").is_null()) w.v = wj.at("v").get<std::size_t>();
                if (!wj.at("w").is_null()) w.w = wj.at("w").get<std::size_t>();
                if (!wj.at("node").is_null()) w.node = wj.at("node").get<std::size_t>();
                if (!wj.at("psi").is_null()) w.psi = wj.at("psi").get<double>();
                r.witness = w;
            }
            r.notes = j.at("notes").get<std::string>();
            out.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed report JSON: ") + e.what());
    }
    return out;
}

std::string manifest_json(const Manifest& m) {
    json j;
    j["scene"] = m.scene_name;
    j["scene_hash"] = m.scene_hash;
    j["seed"] = m.seed;
    j["times"] = m.times;
    j["files"] = m.files;
    j["status"] = m.status;
    if (!m.error.empty()) j["error"] = m.error;
    return j.dump(2) + "\n";
}

void write_wedge_table(std::ostream& out, const WedgeProfile& p) {
    out << "psi,kappa_beta,x,y,D_beta\n";
    for (std::size_t i = 0; i < p.psis.size(); ++i)
        put_row(out, {p.psis[i], p.kappa_beta[i], p.gamma_beta[i].x, p.gamma_beta[i].y, p.D_beta[i]});
}

void write_oval_table(std::ostream& out, double a, double t, std::size_t n) {
    const PlanarCurve c = angenent_oval(a, t, n);
    out << "t,node_index,x,y\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
        out << format_number(t) << ',' << i << ',';
        put_row(out, {c[i].x, c[i].y});
    }
}

void write_reaper_table(std::ostream& out, double t, double x_max, std::size_t n) {
    const ReaperSamples s = grim_reaper(t, x_max, n);
    std::vector<std::pair<double, double>> rows;
    for (std::size_t i = 0; i < s.x.size(); ++i) rows.emplace_back(s.x[i], s.y[i]);
    const double x_half = t + std::numbers::ln2;
    if (x_half <= x_max) {
        const auto it = std::lower_bound(rows.begin(), rows.end(), std::make_pair(x_half, -1.0));
        if (it == rows.end() || it->first != x_half) rows.insert(it, {x_half, grim_reaper_height(t, x_half)});
    }
    out << "t,x,y\n";
    for (const auto& [x, y] : rows) put_row(out, {t, x, y});
}

void write_circle_table(std::ostream& out, double radius, double t, std::size_t n) {
    const PlanarCurve c = shrinking_circle(radius, t, n);
    out << "t,node_index,x,y\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
        out << format_number(t) << ',' << i << ',';
        put_row(out, {c[i].x, c[i].y});
    }
}

}  // namespace csf::io
