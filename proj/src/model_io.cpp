#include "sfb/model_io.hpp"

#include <charconv>
#include <sstream>

#include "sfb/csv.hpp"
#include "sfb/errors.hpp"

namespace sfb {

namespace {

constexpr const char* kHeader = "sfb-model v1";

class TokenReader {
public:
	explicit TokenReader(const std::string& text) : stream_(text) {}

	std::string word() {
		std::string w;
		if (!(stream_ >> w)) throw ParseError("model text: unexpected end");
		return w;
	}

	void expect(const std::string& key) {
		const std::string w = word();
		if (w != key) throw ParseError("model text: expected '" + key + "', got '" + w + "'");
	}

	double number() {
		const std::string w = word();
		double v = 0.0;
		const auto res = std::from_chars(w.data(), w.data() + w.size(), v);
		if (res.ec != std::errc() || res.ptr != w.data() + w.size())
			throw ParseError("model text: bad number '" + w + "'");
		return v;
	}

	long integer() {
		const std::string w = word();
		long v = 0;
		const auto res = std::from_chars(w.data(), w.data() + w.size(), v);
		if (res.ec != std::errc() || res.ptr != w.data() + w.size())
			throw ParseError("model text: bad integer '" + w + "'");
		return v;
	}

	std::vector<double> numbers(std::size_t n) {
		std::vector<double> out(n);
		for (double& v : out) v = number();
		return out;
	}

private:
	std::istringstream stream_;
};

void put(std::string& out, const char* key, double v) {
	out += key;
	out += ' ';
	out += format_double(v);
	out += '\n';
}

void put_vec(std::string& out, const char* key, std::span<const double> v) {
	out += key;
	for (const double x : v) {
		out += ' ';
		out += format_double(x);
	}
	out += '\n';
}

void put_scaler(std::string& out, const AffineScaler& s) {
	out += "scaler_dim " + std::to_string(s.shift.size()) + '\n';
	put_vec(out, "shift", s.shift);
	put_vec(out, "scale", s.scale);
}

AffineScaler read_scaler(TokenReader& in) {
	in.expect("scaler_dim");
	const auto dim = static_cast<std::size_t>(in.integer());
	AffineScaler s;
	in.expect("shift");
	s.shift = in.numbers(dim);
	in.expect("scale");
	s.scale = in.numbers(dim);
	return s;
}

} // namespace

std::string svr_model_to_text(const SvrModel& model) {
	std::string out = std::string(kHeader) + "\nkind svr\n";
	out += "kernel " + kernel_kind_name(model.hyper.kernel.kind) + '\n';
	put(out, "a1", model.hyper.kernel.a1);
	put(out, "a2", model.hyper.kernel.a2);
	out += "degree " + std::to_string(model.hyper.kernel.degree) + '\n';
	put(out, "bandwidth_sq", model.hyper.kernel.bandwidth_sq);
	put(out, "cost", model.hyper.cost);
	put(out, "epsilon", model.hyper.epsilon);
	put(out, "bias", model.bias);
	out += "n " + std::to_string(model.dual_coeffs.size()) + '\n';
	put_vec(out, "coeffs", model.dual_coeffs);
	put_scaler(out, model.input_scaler);
	out += "n_sv " + std::to_string(model.n_sv) + '\n';
	for (std::size_t k = 0; k < model.n_sv; ++k) {
		out += "sv " + std::to_string(model.support_indices[k]);
		for (const double x : model.support_inputs[k]) {
			out += ' ';
			out += format_double(x);
		}
		out += '\n';
	}
	return out;
}

SvrModel svr_model_from_text(const std::string& text) {
	TokenReader in(text);
	in.expect("sfb-model");
	in.expect("v1");
	in.expect("kind");
	in.expect("svr");
	SvrModel m;
	in.expect("kernel");
	m.hyper.kernel.kind = kernel_kind_from_name(in.word());
	in.expect("a1");
	m.hyper.kernel.a1 = in.number();
	in.expect("a2");
	m.hyper.kernel.a2 = in.number();
	in.expect("degree");
	m.hyper.kernel.degree = static_cast<int>(in.integer());
	in.expect("bandwidth_sq");
	m.hyper.kernel.bandwidth_sq = in.number();
	in.expect("cost");
	m.hyper.cost = in.number();
	in.expect("epsilon");
	m.hyper.epsilon = in.number();
	in.expect("bias");
	m.bias = in.number();
	in.expect("n");
	const auto n = static_cast<std::size_t>(in.integer());
	in.expect("coeffs");
	m.dual_coeffs = in.numbers(n);
	m.input_scaler = read_scaler(in);
	in.expect("n_sv");
	m.n_sv = static_cast<std::size_t>(in.integer());
	const std::size_t dim = m.input_scaler.shift.size();
	for (std::size_t k = 0; k < m.n_sv; ++k) {
		in.expect("sv");
		m.support_indices.push_back(static_cast<std::size_t>(in.integer()));
		m.support_inputs.push_back(in.numbers(dim));
	}
	return m;
}

std::string rbf_model_to_text(const RbfNetModel& model) {
	std::string out = std::string(kHeader) + "\nkind rbf\n";
	out += "q " + std::to_string(model.hidden_units()) + '\n';
	out += "dim " + std::to_string(model.input_scaler.shift.size()) + '\n';
	for (const auto& c : model.centroids) put_vec(out, "centroid", c);
	put_vec(out, "spreads", model.spreads);
	put_vec(out, "weights", model.weights);
	put(out, "bias", model.bias);
	put_scaler(out, model.input_scaler);
	return out;
}

RbfNetModel rbf_model_from_text(const std::string& text) {
	TokenReader in(text);
	in.expect("sfb-model");
	in.expect("v1");
	in.expect("kind");
	in.expect("rbf");
	RbfNetModel m;
	in.expect("q");
	const auto q = static_cast<std::size_t>(in.integer());
	in.expect("dim");
	const auto dim = static_cast<std::size_t>(in.integer());
	for (std::size_t j = 0; j < q; ++j) {
		in.expect("centroid");
		m.centroids.push_back(in.numbers(dim));
	}
	in.expect("spreads");
	m.spreads = in.numbers(q);
	in.expect("weights");
	m.weights = in.numbers(q);
	in.expect("bias");
	m.bias = in.number();
	m.input_scaler = read_scaler(in);
	return m;
}

std::string mlp_model_to_text(const MlpModel& model) {
	std::string out = std::string(kHeader) + "\nkind mlp\n";
	out += "p " + std::to_string(model.input_dim) + '\n';
	out += "q " + std::to_string(model.hidden_units) + '\n';
	put_vec(out, "input_weights", model.input_weights);
	put_vec(out, "hidden_bias", model.hidden_bias);
	put_vec(out, "output_weights", model.output_weights);
	put(out, "output_bias", model.output_bias);
	put_scaler(out, model.input_scaler);
	return out;
}

MlpModel mlp_model_from_text(const std::string& text) {
	TokenReader in(text);
	in.expect("sfb-model");
	in.expect("v1");
	in.expect("kind");
	in.expect("mlp");
	MlpModel m;
	in.expect("p");
	m.input_dim = static_cast<std::size_t>(in.integer());
	in.expect("q");
	m.hidden_units = static_cast<std::size_t>(in.integer());
	in.expect("input_weights");
	m.input_weights = in.numbers(m.input_dim * m.hidden_units);
	in.expect("hidden_bias");
	m.hidden_bias = in.numbers(m.hidden_units);
	in.expect("output_weights");
	m.output_weights = in.numbers(m.hidden_units);
	in.expect("output_bias");
	m.output_bias = in.number();
	m.input_scaler = read_scaler(in);
	return m;
}

} // namespace sfb
