#include "sprec/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace sprec {

namespace {

using nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no newline translation
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

void append_row(std::string& buf, std::initializer_list<std::string> fields) {
    bool first = true;
    for (const auto& f : fields) {
        if (!first) buf += ',';
        buf += f;
        first = false;
    }
    buf += '\n';
}

std::string format_size(std::size_t v) { return std::to_string(v); }

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) throw std::runtime_error("double formatting failed");
    return std::string(buf, res.ptr);
}

void write_instance_json(const std::string& path, const ProblemInstance& inst) {
    ordered_json doc;
    doc["version"] = 1;
    doc["n"] = inst.n();
    doc["m"] = inst.m();
    doc["tau"] = inst.tau;
    doc["sigma"] = inst.sigma;
    doc["seed"] = inst.seed;
    doc["a_row_major"] = std::vector<double>(inst.a.data().begin(), inst.a.data().end());
    if (inst.x0) doc["x0"] = *inst.x0;
    doc["b"] = inst.b;
    write_json(path, doc);
}

ProblemInstance read_instance_json(const std::string& path) {
    const ordered_json doc = read_json(path);
    ProblemInstance inst;
    const auto n = doc.at("n").get<std::size_t>();
    const auto m = doc.at("m").get<std::size_t>();
    inst.tau = doc.at("tau").get<std::size_t>();
    inst.sigma = doc.at("sigma").get<double>();
    inst.seed = doc.at("seed").get<std::uint64_t>();
    const auto flat = doc.at("a_row_major").get<std::vector<double>>();
    if (flat.size() != n * m)
        throw std::runtime_error("instance '" + path + "': a_row_major length != n*m");
    inst.a = DenseMatrix(m, n);
    std::copy(flat.begin(), flat.end(), inst.a.data().begin());
    if (doc.contains("x0")) {
        inst.x0 = doc.at("x0").get<std::vector<double>>();
        if (inst.x0->size() != n)
            throw std::runtime_error("instance '" + path + "': x0 length != n");
    }
    inst.b = doc.at("b").get<std::vector<double>>();
    if (inst.b.size() != m) throw std::runtime_error("instance '" + path + "': b length != m");
    return inst;
}

void write_trace_csv(const std::string& path, const IterationTrace& trace) {
    std::string buf = "iter,dx_norm,du_norm,dw_norm,lagrangian,rel_err,lambda\n";
    for (const TraceRow& r : trace) {
        append_row(buf, {format_size(r.iter), format_double(r.dx_norm), format_double(r.du_norm),
                         format_double(r.dw_norm), format_double(r.lagrangian),
                         format_double(r.rel_err), format_double(r.lambda)});
    }
    open_out(path) << buf;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRecord>& records) {
    std::string buf =
        "n,m,tau,sigma,algorithm,trials,successes,success_rate,mean_iterations,"
        "mean_wall_ms,base_seed\n";
    for (const SweepRecord& r : records) {
        append_row(buf, {format_size(r.n), format_size(r.m), format_size(r.tau),
                         format_double(r.sigma), r.algorithm, format_size(r.trials),
                         format_size(r.successes), format_double(r.success_rate),
                         format_double(r.mean_iterations), format_double(r.mean_wall_ms),
                         std::to_string(r.base_seed)});
    }
    open_out(path) << buf;
}

void write_solution_json(const std::string& path, const Solution& sol,
                         const std::string& algorithm, std::optional<double> rel_err) {
    ordered_json doc;
    doc["version"] = 1;
    doc["algorithm"] = algorithm;
    doc["converged"] = sol.converged;
    doc["iterations"] = sol.iterations;
    doc["final_lambda"] = sol.final_lambda;
    doc["rho"] = sol.rho_used;
    if (rel_err)
        doc["rel_err"] = *rel_err;
    else
        doc["rel_err"] = nullptr;
    doc["x_hat"] = sol.x_hat;
    write_json(path, doc);
}

void write_json(const std::string& path, const ordered_json& doc) {
    open_out(path) << doc.dump() << '\n';
}

nlohmann::ordered_json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return ordered_json::parse(in);
}

}  // namespace sprec
