#include "ncpl/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ncpl {

namespace {

using nlohmann::json;

std::string structure_json(const TracialAlgebra& alg) {
    std::ostringstream os;
    os << "{\"kind\":\""
       << (alg.kind == StructureKind::Flat ? "flat" : "tensor_power") << "\""
       << ",\"site_dim\":" << alg.site_dim << ",\"num_sites\":" << alg.num_sites
       << ",\"doubled\":" << (alg.doubled ? "true" : "false")
       << ",\"tol\":" << format_real(alg.tol) << "}";
    return os.str();
}

TracialAlgebra structure_from(const json& j, int dim) {
    std::string kind = j.at("kind").get<std::string>();
    double tol = j.value("tol", 1e-10);
    TracialAlgebra alg;
    if (kind == "flat") {
        alg = TracialAlgebra::flat(dim, tol);
    } else if (kind == "tensor_power") {
        alg = TracialAlgebra::tensor_power(j.at("site_dim").get<int>(),
                                           j.at("num_sites").get<int>(), tol);
    } else {
        throw IoError("unknown algebra structure kind: " + kind);
    }
    if (j.value("doubled", false)) alg = alg.dilated();
    if (alg.dim != dim)
        throw IoError("algebra structure inconsistent with dim field");
    return alg;
}

std::string level_json(const SubalgebraSpec& s) {
    std::ostringstream os;
    os << "{\"kind\":\"";
    switch (s.kind) {
        case SubalgebraSpec::Kind::Trivial: os << "trivial"; break;
        case SubalgebraSpec::Kind::Full: os << "full"; break;
        case SubalgebraSpec::Kind::BlockDiagonal: os << "block_diagonal"; break;
        case SubalgebraSpec::Kind::TensorPrefix: os << "tensor_prefix"; break;
    }
    os << "\",\"blocks\":[";
    for (size_t i = 0; i < s.blocks.size(); ++i) {
        if (i) os << ",";
        os << "[";
        for (size_t k = 0; k < s.blocks[i].size(); ++k) {
            if (k) os << ",";
            os << s.blocks[i][k];
        }
        os << "]";
    }
    os << "],\"prefix\":" << s.prefix
       << ",\"dilated\":" << (s.dilated ? "true" : "false") << "}";
    return os.str();
}

SubalgebraSpec level_from(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    SubalgebraSpec s;
    if (kind == "trivial") {
        s = SubalgebraSpec::trivial();
    } else if (kind == "full") {
        s = SubalgebraSpec::full();
    } else if (kind == "block_diagonal") {
        s = SubalgebraSpec::block_diagonal(
            j.at("blocks").get<std::vector<std::vector<int>>>());
    } else if (kind == "tensor_prefix") {
        s = SubalgebraSpec::tensor_prefix(j.at("prefix").get<int>());
    } else {
        throw IoError("unknown subalgebra kind: " + kind);
    }
    if (j.value("dilated", false)) s = s.dilate();
    return s;
}

}  // namespace

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::string operator_to_json(const Operator& x) {
    std::ostringstream os;
    os << "{\"dim\":" << x.dim() << ",\"structure\":" << structure_json(x.algebra())
       << ",\"entries\":[";
    const Matrix& m = x.entries();
    bool first = true;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (!first) os << ",";
            first = false;
            os << "[" << format_real(m(i, j).real()) << ","
               << format_real(m(i, j).imag()) << "]";
        }
    os << "]}";
    return os.str();
}

Operator operator_from_json(const std::string& text) {
    try {
        json j = json::parse(text);
        int dim = j.at("dim").get<int>();
        TracialAlgebra alg = structure_from(j.at("structure"), dim);
        const auto& entries = j.at("entries");
        if (static_cast<int>(entries.size()) != dim * dim)
            throw IoError("entries length does not match dim^2");
        Matrix m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int k = 0; k < dim; ++k) {
                const auto& pair = entries.at(i * dim + k);
                m(i, k) =
                    Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
            }
        return Operator(alg, std::move(m));
    } catch (const json::exception& e) {
        throw IoError(std::string("operator parse failure: ") + e.what());
    }
}

std::string filtration_to_json(const Filtration& f) {
    std::ostringstream os;
    os << "{\"dim\":" << f.algebra.dim
       << ",\"structure\":" << structure_json(f.algebra) << ",\"levels\":[";
    for (size_t i = 0; i < f.levels.size(); ++i) {
        if (i) os << ",";
        os << level_json(f.levels[i]);
    }
    os << "]}";
    return os.str();
}

Filtration filtration_from_json(const std::string& text) {
    try {
        json j = json::parse(text);
        TracialAlgebra alg =
            structure_from(j.at("structure"), j.at("dim").get<int>());
        std::vector<SubalgebraSpec> levels;
        for (const auto& lv : j.at("levels")) levels.push_back(level_from(lv));
        return Filtration(alg, std::move(levels));
    } catch (const json::exception& e) {
        throw IoError(std::string("filtration parse failure: ") + e.what());
    }
}

std::string martingale_to_json(const Martingale& m) {
    std::ostringstream os;
    os << "{\"filtration\":" << filtration_to_json(m.filtration())
       << ",\"elements\":[";
    for (size_t k = 0; k < m.steps(); ++k) {
        if (k) os << ",";
        os << operator_to_json(m.element(k));
    }
    os << "]}";
    return os.str();
}

Martingale martingale_from_json(const std::string& text) {
    try {
        json j = json::parse(text);
        Filtration filt = filtration_from_json(j.at("filtration").dump());
        std::vector<Operator> elements;
        for (const auto& el : j.at("elements"))
            elements.push_back(operator_from_json(el.dump()));
        return Martingale(std::move(filt), std::move(elements));
    } catch (const json::exception& e) {
        throw IoError(std::string("martingale parse failure: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failure on " + path);
}

}  // namespace ncpl
