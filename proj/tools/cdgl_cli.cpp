#include "cdgl/classifier.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>

using namespace cdgl;
using ojson = nlohmann::ordered_json;

namespace {

// exit codes
constexpr int ok = 0;
constexpr int check_failed = 1;
constexpr int input_error = 2;

struct InputError : std::runtime_error
{
	using std::runtime_error::runtime_error;
};

struct CheckFailure : std::runtime_error
{
	using std::runtime_error::runtime_error;
};

int max_truncation()
{
	const char *env = std::getenv("CDGL_MAX_TRUNC");
	if (!env)
		return 8;
	try
	{
		int v = std::stoi(env);
		if (v >= 1)
			return v;
	}
	catch (const std::exception &)
	{
	}
	throw InputError(std::string("CDGL_MAX_TRUNC is not a positive integer: ") + env);
}

void require_truncation(int n)
{
	int cap = max_truncation();
	if (n < 1 || n > cap)
		throw InputError("--trunc must lie in [1, " + std::to_string(cap) + "]");
}

std::string read_file(const std::string &path)
{
	std::ifstream in(path);
	if (!in)
		throw InputError("cannot read " + path);
	std::stringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

nlohmann::json read_json(const std::string &path)
{
	try
	{
		return nlohmann::json::parse(read_file(path));
	}
	catch (const nlohmann::json::parse_error &e)
	{
		throw InputError(path + ": " + e.what());
	}
}

// A model document carries "generators"; anything else is read as a complex.
Model load_model_or_complex(const std::string &path, int n)
{
	auto doc = read_json(path);
	if (doc.is_object() && doc.contains("generators"))
		return model_from_json(doc);
	return build_model(load_complex(doc), n);
}

class Output
{
	std::ofstream file_;
	std::ostream *out_ = &std::cout;

  public:
	explicit Output(const std::string &path)
	{
		if (path.empty())
			return;
		file_.open(path);
		if (!file_)
			throw InputError("cannot write " + path);
		out_ = &file_;
	}
	void line(const ojson &j) { *out_ << j.dump() << '\n'; }
	void text(const std::string &s) { *out_ << s << '\n'; }
};

ojson residues_json(const Cdgl &d, const DSquaredReport &r)
{
	ojson out = ojson::object();
	for (auto &[g, e] : r.residues)
		out[d.context()->generator(g).label] = e.to_string();
	return out;
}

// Identifiers of an expression, in order of first appearance.
std::vector<std::string> identifiers(const std::string &text)
{
	static const std::regex ident("[A-Za-z_][A-Za-z0-9_]*");
	std::vector<std::string> out;
	for (auto it = std::sregex_iterator(text.begin(), text.end(), ident); it != std::sregex_iterator(); ++it)
		out.push_back(it->str());
	return out;
}

int run_model(const std::string &input, int n, const std::string &out_path)
{
	require_truncation(n);
	Model m = build_model(load_complex_text(read_file(input)), n);
	auto report = m.cdgl.check_d_squared();
	ojson doc = model_to_json(m);
	doc["d_squared"] = {{"clean", report.clean()}, {"residues", residues_json(m.cdgl, report)}};
	Output out(out_path);
	out.line(doc);
	if (!out_path.empty())
		std::cout << ojson{{"summary", "model written"},
		                   {"generators", m.context()->size()},
		                   {"d_squared_clean", report.clean()}}
		                 .dump()
		          << '\n';
	return report.clean() ? ok : check_failed;
}

int run_pi0(const std::string &input, int n, std::optional<int> base, const std::string &out_path)
{
	require_truncation(n);
	Model m = build_model(load_complex_text(read_file(input)), n);
	ClassifierOptions opts;
	opts.base_vertex = base;
	Classifier c(m, opts);
	Pi0Report r = pi0_classes(c);
	Output out(out_path);
	out.line(class_report(LieElement::zero(m.context(), -1), r.zero_class));
	for (auto &[v, k] : r.vertex_classes)
	{
		ojson line = class_report(m.vertex(v), k);
		line["vertex"] = v;
		out.line(line);
	}
	std::string msg = "components: " + std::to_string(r.components) +
	                  ", MC classes: " + std::to_string(r.classes.size()) + ", " +
	                  (r.pass() ? "PASS" : "FAIL");
	out.line({{"summary", msg},
	          {"components", r.components},
	          {"classes", r.classes.size()},
	          {"pass", r.pass()}});
	return r.pass() ? ok : check_failed;
}

int run_classify(const std::string &input, const std::string &element, int n,
                 std::optional<int> base, int fuzz, uint64_t seed, const std::string &out_path)
{
	require_truncation(n);
	Model m = load_model_or_complex(input, n);
	if (!m.cdgl.check_d_squared().clean())
		throw CheckFailure("model differential does not square to zero");
	LieElement u;
	try
	{
		u = parse_element(m.context(), element, -1);
	}
	catch (const std::invalid_argument &e)
	{
		throw InputError(e.what());
	}
	if (!is_mc(m.cdgl, u))
		throw InputError("element is not Maurer-Cartan: " + u.to_string());
	ClassifierOptions opts;
	opts.base_vertex = base;
	Classifier c(m, opts);
	Output out(out_path);
	McClass k = c.classify(u);
	out.line(class_report(u, k));
	std::mt19937_64 rng(seed);
	int agree = 0;
	for (int i = 0; i < fuzz; ++i)
	{
		LieElement x = random_element(m.context(), 0, 1, std::min(3, n), rng);
		LieElement v = gauge(x, u, m.cdgl);
		McClass kv = c.classify(v);
		agree += kv.same_class(k);
		ojson line = class_report(v, kv);
		line["gauge"] = x.to_string();
		out.line(line);
	}
	bool pass = agree == fuzz;
	out.line({{"summary", k.verdict()}, {"fuzz", fuzz}, {"agree", agree}, {"pass", pass}});
	return pass ? ok : check_failed;
}

int run_bch(const std::string &xs, const std::string &ys, int n)
{
	require_truncation(n);
	std::set<std::string> names;
	for (auto &s : {xs, ys})
		for (auto &id : identifiers(s))
			names.insert(id);
	std::vector<Generator> gens;
	for (auto &name : names)
		gens.push_back({int(gens.size()), 0, name});
	auto ctx = AlgebraContext::make(gens, n);
	LieElement x, y;
	try
	{
		x = parse_element(ctx, xs, 0);
		y = parse_element(ctx, ys, 0);
	}
	catch (const std::invalid_argument &e)
	{
		throw InputError(e.what());
	}
	std::cout << bch(x, y).to_string() << '\n';
	return ok;
}

int run_gauge(const std::string &xs, const std::string &zs, const std::string &input, int n)
{
	require_truncation(n);
	Model m = load_model_or_complex(input, n);
	LieElement x, z;
	try
	{
		x = parse_element(m.context(), xs, 0);
		z = parse_element(m.context(), zs, -1);
	}
	catch (const std::invalid_argument &e)
	{
		throw InputError(e.what());
	}
	std::cout << gauge(x, z, m.cdgl).to_string() << '\n';
	return ok;
}

int run_bernoulli(int count)
{
	if (count < 0)
		throw InputError("bernoulli: index must be >= 0");
	for (int k = 0; k <= count; ++k)
		std::cout << ojson{{"n", k}, {"B", to_string(bernoulli(k))}}.dump() << '\n';
	return ok;
}

int run_check(const std::string &target, int n, const std::string &out_path)
{
	require_truncation(n);
	Output out(out_path);
	int failures = 0;
	auto record = [&](const std::string &name, bool pass, ojson detail = ojson::object()) {
		failures += !pass;
		ojson line{{"check", name}, {"pass", pass}};
		if (!detail.empty())
			line["detail"] = detail;
		out.line(line);
	};
	if (target == "ls-interval")
	{
		LsInterval li = ls_interval(n);
		auto r = li.cdgl.check_d_squared();
		record("d_squared", r.clean(), residues_json(li.cdgl, r));
		LieElement a = LieElement::generator(li.cdgl.context(), li.a);
		LieElement b = LieElement::generator(li.cdgl.context(), li.b);
		LieElement x = LieElement::generator(li.cdgl.context(), li.x);
		record("endpoints_mc", is_mc(li.cdgl, a) && is_mc(li.cdgl, b));
		record("gauge_x_b_is_a", gauge(x, b, li.cdgl) == a);
		record("group_law", gauge(bch(x, -x), b, li.cdgl) == gauge(x, gauge(-x, b, li.cdgl), li.cdgl));
	}
	else if (target == "cylinder-iso")
	{
		CylinderIso c = cylinder_iso(n);
		auto res = chain_map_residues(c.psi, c.interval.cdgl, c.cylinder);
		ojson detail = ojson::object();
		for (size_t g = 0; g < res.size(); ++g)
			if (!res[g].is_zero())
				detail[c.interval.cdgl.context()->generator(int(g)).label] = res[g].to_string();
		record("chain_map", all_zero(res), detail);
		record("d_squared", c.cylinder.check_d_squared().clean());
		record("psi_b_mc", is_mc(c.cylinder, c.psi.image(c.interval.b)));
	}
	else
	{
		Model m = load_model_or_complex(target, n);
		auto r = m.cdgl.check_d_squared();
		record("d_squared", r.clean(), residues_json(m.cdgl, r));
		auto lin = boundary_residues(m);
		record("linear_part", all_zero(lin));
		bool vertices_mc = true;
		for (int v : m.complex.vertices())
			vertices_mc = vertices_mc && is_mc(m.cdgl, m.vertex(v));
		record("vertices_mc", vertices_mc);
	}
	out.line({{"summary", failures == 0 ? "PASS" : "FAIL"}, {"failures", failures}});
	return failures == 0 ? ok : check_failed;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"Exact computations in free complete dgl models of simplicial complexes"};
	app.require_subcommand(1);
	int n = 4;
	std::string out_path, input, xs, ys, element;
	std::optional<int> base;
	uint64_t seed = 1;
	int fuzz = 0, count = 10;

	auto add_trunc = [&](CLI::App *s) { s->add_option("--trunc", n, "truncation order N")->capture_default_str(); };
	auto add_out = [&](CLI::App *s) { s->add_option("--out", out_path, "output file (default stdout)"); };

	auto *model = app.add_subcommand("model", "build the model of a complex");
	model->add_option("complex", input, "complex JSON")->required();
	add_trunc(model);
	add_out(model);

	auto *pi0 = app.add_subcommand("pi0", "classify 0 and every vertex; count classes");
	pi0->add_option("complex", input, "complex JSON")->required();
	pi0->add_option("--base-vertex", base, "base vertex of its component");
	add_trunc(pi0);
	add_out(pi0);

	auto *classify = app.add_subcommand("classify", "gauge class of an MC element");
	classify->add_option("input", input, "complex or model JSON")->required();
	classify->add_option("element", element, "MC element in element text")->required();
	classify->add_option("--base-vertex", base, "base vertex of its component");
	classify->add_option("--fuzz", fuzz, "random gauge perturbations to classify as well");
	classify->add_option("--seed", seed, "seed for --fuzz");
	add_trunc(classify);
	add_out(classify);

	auto *bchc = app.add_subcommand("bch", "BCH product of degree-0 expressions");
	bchc->add_option("x", xs)->required();
	bchc->add_option("y", ys)->required();
	add_trunc(bchc);

	auto *gaugec = app.add_subcommand("gauge", "gauge action of x on z in a model");
	gaugec->add_option("x", xs)->required();
	gaugec->add_option("z", ys)->required();
	gaugec->add_option("input", input, "complex or model JSON")->required();
	add_trunc(gaugec);

	auto *bern = app.add_subcommand("bernoulli", "Bernoulli numbers B_0..B_n");
	bern->add_option("n", count)->capture_default_str();

	auto *check = app.add_subcommand("check", "self-checks: ls-interval, cylinder-iso, or a model file");
	check->add_option("target", input)->required();
	add_trunc(check);
	add_out(check);

	try
	{
		app.parse(argc, argv);
	}
	catch (const CLI::ParseError &e)
	{
		int code = app.exit(e);
		return code == 0 ? ok : input_error;
	}

	try
	{
		if (*model)
			return run_model(input, n, out_path);
		if (*pi0)
			return run_pi0(input, n, base, out_path);
		if (*classify)
			return run_classify(input, element, n, base, fuzz, seed, out_path);
		if (*bchc)
			return run_bch(xs, ys, n);
		if (*gaugec)
			return run_gauge(xs, ys, input, n);
		if (*bern)
			return run_bernoulli(count);
		if (*check)
			return run_check(input, n, out_path);
	}
	catch (const InputError &e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return input_error;
	}
	catch (const ComplexError &e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return input_error;
	}
	catch (const ModelFormatError &e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return input_error;
	}
	catch (const std::invalid_argument &e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return input_error;
	}
	catch (const std::exception &e)
	{
		std::cerr << "failure: " << e.what() << '\n';
		return check_failed;
	}
	return ok;
}
