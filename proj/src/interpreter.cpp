#include "dpmlc/interpreter.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dpmlc {

namespace {

[[noreturn]] void bad(const std::string& what) {
    throw std::runtime_error("program: " + what);
}

struct LineReader {
    std::istringstream in;
    std::string current;
    int lineno = 0;

    explicit LineReader(const std::string& text) : in(text) {}

    bool next() {
        while (std::getline(in, current)) {
            ++lineno;
            std::size_t a = current.find_first_not_of(" \t\r");
            if (a == std::string::npos) continue;
            std::size_t b = current.find_last_not_of(" \t\r");
            current = current.substr(a, b - a + 1);
            return true;
        }
        return false;
    }

    std::vector<std::string> tokens() const {
        std::vector<std::string> out;
        std::istringstream t(current);
        std::string tok;
        while (t >> tok) out.push_back(tok);
        return out;
    }

    [[noreturn]] void fail(const std::string& what) const {
        bad(what + " at line " + std::to_string(lineno) + " ('" + current + "')");
    }
};

FixedFormat parse_format(const std::string& s) {
    // "q8.8"
    if (s.size() < 4 || s[0] != 'q') bad("unknown format '" + s + "'");
    const auto dot = s.find('.');
    if (dot == std::string::npos) bad("unknown format '" + s + "'");
    FixedFormat f;
    f.int_bits = std::stoi(s.substr(1, dot - 1));
    f.frac_bits = std::stoi(s.substr(dot + 1));
    if (f.int_bits < 1 || f.frac_bits < 1 || f.int_bits + f.frac_bits > 32)
        bad("unsupported format '" + s + "'");
    return f;
}

std::int64_t to_i64(const std::string& s, const LineReader& r) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) r.fail("bad integer '" + s + "'");
        return v;
    } catch (const std::exception&) {
        r.fail("bad integer '" + s + "'");
    }
}

CgraProgram parse_cgra(LineReader& r) {
    CgraProgram p;
    auto expect_kv = [&](const std::string& key) -> std::string {
        if (!r.next()) bad("unexpected end of program, expected '" + key + "'");
        const auto t = r.tokens();
        if (t.size() != 2 || t[0] != key) r.fail("expected '" + key + " <value>'");
        return t[1];
    };
    p.format = parse_format(expect_kv("format"));
    p.input_width = static_cast<int>(to_i64(expect_kv("input"), r));
    p.output_width = static_cast<int>(to_i64(expect_kv("output"), r));
    const int n_layers = static_cast<int>(to_i64(expect_kv("layers"), r));
    if (n_layers < 1) r.fail("need at least one layer");

    p.layers.resize(static_cast<std::size_t>(n_layers));
    for (int l = 0; l < n_layers; ++l) {
        CgraProgram::Layer& layer = p.layers[static_cast<std::size_t>(l)];
        if (!r.next()) bad("missing layer " + std::to_string(l));
        auto t = r.tokens();
        if (t.size() != 6 || t[0] != "layer" || to_i64(t[1], r) != l || t[2] != "in" ||
            t[4] != "out")
            r.fail("expected 'layer " + std::to_string(l) + " in <n> out <n>'");
        layer.in = static_cast<int>(to_i64(t[3], r));
        layer.out = static_cast<int>(to_i64(t[5], r));

        if (!r.next()) bad("truncated layer body");
        t = r.tokens();
        if (t.size() != 3 || t[0] != "map" || t[1] != "neuron" || to_i64(t[2], r) != layer.out)
            r.fail("expected 'map neuron <out>'");

        if (!r.next()) bad("truncated layer body");
        t = r.tokens();
        if (t.size() != 5 || t[0] != "map" || t[1] != "chunk" || t[3] != "lanes")
            r.fail("expected 'map chunk <n> lanes <n>'");
        layer.chunks = to_i64(t[2], r);
        layer.lanes = static_cast<int>(to_i64(t[4], r));
        if (layer.lanes < 1 || layer.chunks != (layer.in + layer.lanes - 1) / layer.lanes)
            r.fail("chunk count does not cover the layer input");

        if (!r.next() || r.current != "mul x w" + std::to_string(l)) r.fail("expected 'mul x w" + std::to_string(l) + "'");
        if (!r.next() || r.current != "reduce add") r.fail("expected 'reduce add'");
        if (!r.next() || r.current != "add_bias b" + std::to_string(l)) r.fail("expected 'add_bias b" + std::to_string(l) + "'");

        if (!r.next()) bad("truncated layer body");
        t = r.tokens();
        if (t.size() != 2 || t[0] != "act" || (t[1] != "relu" && t[1] != "tanh" && t[1] != "none"))
            r.fail("expected 'act relu|tanh|none'");
        layer.act = t[1];
        if (!r.next() || r.current != "store_doublebuf") r.fail("expected 'store_doublebuf'");
    }

    // weight and bias tables, in layer order
    for (int l = 0; l < n_layers; ++l) {
        CgraProgram::Layer& layer = p.layers[static_cast<std::size_t>(l)];
        if (!r.next()) bad("missing table w" + std::to_string(l));
        auto t = r.tokens();
        if (t.size() != 4 || t[0] != "table" || t[1] != "w" + std::to_string(l) ||
            to_i64(t[2], r) != layer.out || to_i64(t[3], r) != layer.in)
            r.fail("expected 'table w" + std::to_string(l) + " <out> <in>'");
        layer.weights.reserve(static_cast<std::size_t>(layer.out) * layer.in);
        for (int i = 0; i < layer.out; ++i) {
            if (!r.next()) bad("truncated weight table");
            const auto row = r.tokens();
            if (static_cast<int>(row.size()) != layer.in) r.fail("weight row width mismatch");
            for (const auto& v : row) layer.weights.push_back(to_i64(v, r));
        }
        if (!r.next()) bad("missing table b" + std::to_string(l));
        t = r.tokens();
        if (t.size() != 3 || t[0] != "table" || t[1] != "b" + std::to_string(l) ||
            to_i64(t[2], r) != layer.out)
            r.fail("expected 'table b" + std::to_string(l) + " <out>'");
        if (!r.next()) bad("truncated bias table");
        const auto row = r.tokens();
        if (static_cast<int>(row.size()) != layer.out) r.fail("bias row width mismatch");
        for (const auto& v : row) layer.biases.push_back(to_i64(v, r));
    }
    if (!r.next() || r.current != "end") bad("missing 'end'");

    // widths must chain
    int cur = p.input_width;
    for (const auto& layer : p.layers) {
        if (layer.in != cur) bad("layer input width does not chain");
        cur = layer.out;
    }
    if (cur != p.output_width) bad("final layer width does not match output");
    return p;
}

MatProgram parse_mat(LineReader& r) {
    MatProgram p;
    auto expect_kv = [&](const std::string& key) -> std::string {
        if (!r.next()) bad("unexpected end of program, expected '" + key + "'");
        const auto t = r.tokens();
        if (t.size() != 2 || t[0] != key) r.fail("expected '" + key + " <value>'");
        return t[1];
    };

    const std::string kind = expect_kv("kind");
    if (kind == "kmeans") p.kind = MatProgram::Kind::kmeans;
    else if (kind == "svm") p.kind = MatProgram::Kind::svm;
    else bad("unknown mat program kind '" + kind + "'");

    p.format = parse_format(expect_kv("format"));
    p.input_width = static_cast<int>(to_i64(expect_kv("input"), r));
    if (p.kind == MatProgram::Kind::svm) p.bias = to_i64(expect_kv("bias"), r);
    const int n_tables = static_cast<int>(to_i64(expect_kv("tables"), r));
    if (n_tables < 1) bad("no tables");

    if (!r.next()) bad("missing first table");
    for (int i = 0; i < n_tables; ++i) {
        auto t = r.tokens();
        MatProgram::Table table;
        if (p.kind == MatProgram::Kind::kmeans) {
            if (t.size() != 4 || t[0] != "table" || to_i64(t[1], r) != i || t[2] != "action")
                r.fail("expected 'table " + std::to_string(i) + " action <id>'");
            table.action = static_cast<int>(to_i64(t[3], r));
        } else {
            if (t.size() != 4 || t[0] != "table" || to_i64(t[1], r) != i || t[2] != "feature")
                r.fail("expected 'table " + std::to_string(i) + " feature <index>'");
            table.feature = static_cast<int>(to_i64(t[3], r));
            if (table.feature < 0 || table.feature >= p.input_width)
                r.fail("feature index out of range");
        }

        bool more = r.next();
        while (more) {
            t = r.tokens();
            if (t.empty() || t[0] == "table" || t[0] == "default" || t[0] == "decision") break;
            if (p.kind == MatProgram::Kind::kmeans) {
                if (t.size() != 5 || t[0] != "match" || t[2] != "range")
                    r.fail("expected 'match <feature> range <lo> <hi>'");
                MatProgram::Match m;
                m.feature = static_cast<int>(to_i64(t[1], r));
                if (m.feature < 0 || m.feature >= p.input_width)
                    r.fail("feature index out of range");
                m.lo = to_i64(t[3], r);
                m.hi = to_i64(t[4], r);
                if (m.lo > m.hi) r.fail("empty range");
                table.matches.push_back(m);
            } else {
                if (t.size() != 5 || t[0] != "bucket" || t[3] != "score")
                    r.fail("expected 'bucket <lo> <hi> score <value>'");
                MatProgram::Bucket b;
                b.lo = to_i64(t[1], r);
                b.hi = to_i64(t[2], r);
                b.score = to_i64(t[4], r);
                if (b.lo > b.hi) r.fail("empty bucket");
                if (!table.buckets.empty() && b.lo != table.buckets.back().hi + 1)
                    r.fail("buckets must be contiguous");
                table.buckets.push_back(b);
            }
            more = r.next();
        }
        if (p.kind == MatProgram::Kind::kmeans && table.matches.empty())
            r.fail("table without match entries");
        if (p.kind == MatProgram::Kind::svm && table.buckets.empty())
            r.fail("table without buckets");
        p.tables.push_back(std::move(table));
        if (!more) bad("missing trailer after tables");
    }

    auto t = r.tokens();
    if (p.kind == MatProgram::Kind::kmeans) {
        if (t.size() != 3 || t[0] != "default" || t[1] != "action")
            r.fail("expected 'default action <id>'");
        p.default_action = static_cast<int>(to_i64(t[2], r));
    } else {
        if (t.size() != 5 || t[0] != "decision" || t[1] != "pos" || t[3] != "neg")
            r.fail("expected 'decision pos <id> neg <id>'");
        p.pos_class = static_cast<int>(to_i64(t[2], r));
        p.neg_class = static_cast<int>(to_i64(t[4], r));
    }
    if (!r.next() || r.current != "end") bad("missing 'end'");
    return p;
}

void check_width(int program_width, std::size_t row_width) {
    if (program_width != static_cast<int>(row_width))
        bad("input width mismatch: program expects " + std::to_string(program_width) +
            ", row has " + std::to_string(row_width));
}

std::vector<std::int64_t> quantize_row(std::span<const double> row, FixedFormat f) {
    std::vector<std::int64_t> q;
    q.reserve(row.size());
    for (double v : row) q.push_back(fixed::quantize_raw(v, f));
    return q;
}

// Executes the loop nest: per neuron, lane products are saturating-multiplied
// and reduced left to right within each chunk, chunk partials are reduced
// left to right, then bias and activation apply.
std::vector<std::int64_t> run_cgra(const CgraProgram& p, std::span<const double> row) {
    check_width(p.input_width, row.size());
    std::vector<std::int64_t> buf = quantize_row(row, p.format);
    for (const auto& layer : p.layers) {
        std::vector<std::int64_t> next(static_cast<std::size_t>(layer.out), 0);
        for (int neuron = 0; neuron < layer.out; ++neuron) {
            std::int64_t acc = 0;
            for (long chunk = 0; chunk < layer.chunks; ++chunk) {
                std::int64_t partial = 0;
                const long base = chunk * layer.lanes;
                const long stop = std::min<long>(base + layer.lanes, layer.in);
                for (long i = base; i < stop; ++i) {
                    const std::int64_t prod = fixed::sat_mul(
                        buf[static_cast<std::size_t>(i)],
                        layer.weights[static_cast<std::size_t>(neuron) * layer.in +
                                      static_cast<std::size_t>(i)],
                        p.format);
                    partial = fixed::sat_add(partial, prod, p.format);
                }
                acc = fixed::sat_add(acc, partial, p.format);
            }
            acc = fixed::sat_add(acc, layer.biases[static_cast<std::size_t>(neuron)], p.format);
            if (layer.act == "relu") {
                acc = std::max<std::int64_t>(acc, 0);
            } else if (layer.act == "tanh") {
                // activation unit: tanh evaluated on the dequantized value,
                // result requantized
                acc = fixed::quantize_raw(std::tanh(fixed::dequantize(acc, p.format)), p.format);
            }
            next[static_cast<std::size_t>(neuron)] = acc;
        }
        buf = std::move(next);  // store_doublebuf
    }
    return buf;
}

int run_mat(const MatProgram& p, std::span<const double> row, std::int64_t* score_out) {
    check_width(p.input_width, row.size());
    const auto q = quantize_row(row, p.format);
    if (p.kind == MatProgram::Kind::kmeans) {
        for (const auto& table : p.tables) {
            bool hit = true;
            for (const auto& m : table.matches) {
                const std::int64_t v = q[static_cast<std::size_t>(m.feature)];
                if (v < m.lo || v > m.hi) {
                    hit = false;
                    break;
                }
            }
            if (hit) return table.action;  // first match wins
        }
        return p.default_action;
    }
    // svm: every table fires exactly one bucket; contributions accumulate
    std::int64_t score = 0;
    for (const auto& table : p.tables) {
        const std::int64_t v = q[static_cast<std::size_t>(table.feature)];
        bool hit = false;
        for (const auto& b : table.buckets) {
            if (v >= b.lo && v <= b.hi) {
                score += b.score;
                hit = true;
                break;
            }
        }
        if (!hit) bad("svm table does not cover value " + std::to_string(v));
    }
    score += p.bias;
    if (score_out) *score_out = score;
    return score >= 0 ? p.pos_class : p.neg_class;
}

}  // namespace

ParsedProgram parse_program(const std::string& text) {
    LineReader r(text);
    if (!r.next()) bad("empty program");
    const auto t = r.tokens();
    if (t.size() == 2 && t[0] == "cgra_program" && t[1] == "v1") return parse_cgra(r);
    if (t.size() == 2 && t[0] == "mat_program" && t[1] == "v1") return parse_mat(r);
    bad("unknown program header '" + r.current + "'");
}

int interpret(const ParsedProgram& program, std::span<const double> row) {
    if (const auto* cgra = std::get_if<CgraProgram>(&program)) {
        const auto out = run_cgra(*cgra, row);
        int best = 0;
        for (int i = 1; i < static_cast<int>(out.size()); ++i)
            if (out[static_cast<std::size_t>(i)] > out[static_cast<std::size_t>(best)]) best = i;
        return best;
    }
    return run_mat(std::get<MatProgram>(program), row, nullptr);
}

int interpret(const GeneratedArtifact& artifact, std::span<const double> row) {
    return interpret(parse_program(artifact.program_text), row);
}

std::vector<double> interpret_outputs(const ParsedProgram& program, std::span<const double> row) {
    if (const auto* cgra = std::get_if<CgraProgram>(&program)) {
        const auto out = run_cgra(*cgra, row);
        std::vector<double> vals;
        vals.reserve(out.size());
        for (auto v : out) vals.push_back(fixed::dequantize(v, cgra->format));
        return vals;
    }
    const auto& mat = std::get<MatProgram>(program);
    std::int64_t score = 0;
    const int result = run_mat(mat, row, &score);
    if (mat.kind == MatProgram::Kind::svm)
        return {fixed::dequantize(score, mat.format)};
    return {static_cast<double>(result)};
}

std::vector<double> interpret_outputs(const GeneratedArtifact& artifact,
                                      std::span<const double> row) {
    return interpret_outputs(parse_program(artifact.program_text), row);
}

}  // namespace dpmlc
