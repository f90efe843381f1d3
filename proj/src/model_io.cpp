#include "dpmlc/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dpmlc {

namespace {

void put_double(std::ostringstream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

void put_params(std::ostringstream& out, const std::vector<double>& flat) {
    out << "params " << flat.size() << "\n";
    for (std::size_t i = 0; i < flat.size(); ++i) {
        put_double(out, flat[i]);
        out << ((i + 1) % 8 == 0 || i + 1 == flat.size() ? "\n" : " ");
    }
}

std::vector<double> read_params(std::istringstream& in) {
    std::string kw;
    std::size_t n = 0;
    if (!(in >> kw >> n) || kw != "params")
        throw std::runtime_error("model file: expected 'params <count>'");
    std::vector<double> flat(n);
    for (auto& v : flat)
        if (!(in >> v)) throw std::runtime_error("model file: truncated parameter array");
    return flat;
}

}  // namespace

std::string serialize_model(const TrainedModel& model) {
    std::ostringstream out;
    if (const auto* mlp = std::get_if<MlpModel>(&model)) {
        out << "dpmlc_model 1 mlp\n";
        out << "activation " << to_string(mlp->activation) << "\n";
        out << "widths " << mlp->input_width;
        for (const auto& w : mlp->weights) out << " " << w.rows;
        out << "\n";
        std::vector<double> flat;
        for (std::size_t l = 0; l < mlp->weights.size(); ++l) {
            flat.insert(flat.end(), mlp->weights[l].a.begin(), mlp->weights[l].a.end());
            flat.insert(flat.end(), mlp->biases[l].begin(), mlp->biases[l].end());
        }
        put_params(out, flat);
    } else if (const auto* km = std::get_if<KMeansModel>(&model)) {
        out << "dpmlc_model 1 kmeans\n";
        out << "clusters " << km->k << " " << km->d << "\n";
        put_params(out, km->centroids);
    } else {
        const auto& svm = std::get<SvmModel>(model);
        out << "dpmlc_model 1 svm\n";
        out << "features " << svm.w.size() << "\n";
        std::vector<double> flat = svm.w;
        flat.push_back(svm.b);
        put_params(out, flat);
    }
    return out.str();
}

TrainedModel deserialize_model(const std::string& text) {
    std::istringstream in(text);
    std::string magic, kind;
    int version = 0;
    if (!(in >> magic >> version >> kind) || magic != "dpmlc_model")
        throw std::runtime_error("model file: bad header");
    if (version != 1) throw std::runtime_error("model file: unsupported version");

    if (kind == "mlp") {
        std::string kw, act;
        if (!(in >> kw >> act) || kw != "activation")
            throw std::runtime_error("model file: expected activation");
        MlpModel m;
        m.activation = activation_from_string(act);
        if (!(in >> kw) || kw != "widths") throw std::runtime_error("model file: expected widths");
        std::vector<int> widths;
        {
            std::string rest;
            std::getline(in, rest);
            std::istringstream ws(rest);
            int w;
            while (ws >> w) widths.push_back(w);
        }
        if (widths.size() < 2) throw std::runtime_error("model file: need at least 2 widths");
        auto flat = read_params(in);
        std::size_t pos = 0;
        m.input_width = widths.front();
        m.output_width = widths.back();
        for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
            Mat w(widths[l + 1], widths[l]);
            for (auto& v : w.a) {
                if (pos >= flat.size()) throw std::runtime_error("model file: parameter underflow");
                v = flat[pos++];
            }
            std::vector<double> b(static_cast<std::size_t>(widths[l + 1]));
            for (auto& v : b) {
                if (pos >= flat.size()) throw std::runtime_error("model file: parameter underflow");
                v = flat[pos++];
            }
            m.weights.push_back(std::move(w));
            m.biases.push_back(std::move(b));
        }
        if (pos != flat.size()) throw std::runtime_error("model file: trailing parameters");
        return m;
    }
    if (kind == "kmeans") {
        std::string kw;
        KMeansModel m;
        if (!(in >> kw >> m.k >> m.d) || kw != "clusters")
            throw std::runtime_error("model file: expected clusters");
        m.centroids = read_params(in);
        if (m.centroids.size() != static_cast<std::size_t>(m.k) * m.d)
            throw std::runtime_error("model file: centroid count mismatch");
        return m;
    }
    if (kind == "svm") {
        std::string kw;
        std::size_t d = 0;
        if (!(in >> kw >> d) || kw != "features")
            throw std::runtime_error("model file: expected features");
        auto flat = read_params(in);
        if (flat.size() != d + 1) throw std::runtime_error("model file: parameter count mismatch");
        SvmModel m;
        m.b = flat.back();
        flat.pop_back();
        m.w = std::move(flat);
        return m;
    }
    throw std::runtime_error("model file: unknown kind '" + kind + "'");
}

void save_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << serialize_model(model);
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_model(ss.str());
}

long param_count(const TrainedModel& model) {
    if (const auto* m = std::get_if<MlpModel>(&model)) return param_count(*m);
    if (const auto* m = std::get_if<KMeansModel>(&model)) return param_count(*m);
    return param_count(std::get<SvmModel>(model));
}

}  // namespace dpmlc
