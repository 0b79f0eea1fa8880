// Command-line front end. Every subcommand prints a text summary, optionally writes JSON
// (--out), and exits 0 iff all of its verifications pass.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "hd/deformation.hpp"
#include "hd/perfection.hpp"
#include "hd/quadratic.hpp"
#include "hd/resolution.hpp"

using namespace hd;
using nlohmann::json;

namespace {

bool verbose() {
  const char* v = std::getenv("HD_LOG");
  return v && std::string(v) != "0";
}

void log(const std::string& msg) {
  if (verbose()) std::cerr << "[hdtool] " << msg << "\n";
}

json readJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

// write to a temporary file next to the target, then rename
void writeJson(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

RingPtr ringByName(const std::string& s) {
  static const std::map<std::string, RingPtr (*)()> named = {
      {"F2", ringF2}, {"Z4", ringZ4}, {"dual", ringDual}, {"F2u3", ringF2u3}, {"Z4u", ringZ4u}};
  if (auto it = named.find(s); it != named.end()) return it->second();
  if (s == "Z8") return Ring::zmod(2, 3);
  for (auto A : defaultTestRings())
    if (A->name() == s) return A;
  if (std::filesystem::exists(s)) return Ring::fromJson(readJson(s));
  throw std::invalid_argument("unknown ring: " + s + " (F2, Z4, Z8, dual, F2u3, Z4u or a JSON file)");
}

std::vector<QuadUnit> unitsFrom(const std::vector<std::string>& names) {
  if (names.empty()) return allQuadUnits();
  std::vector<QuadUnit> ys;
  for (const auto& n : names) ys.push_back(parseQuadUnit(n));
  return ys;
}

Elem parseElem(const Ring& A, const json& j) {
  if (j.is_number_integer()) return A.constant(j.get<long long>());
  return A.fromPoly(Ring::parsePoly(j, A.vars()));
}

struct Common {
  std::string out;
};

int finish(const Common& c, const json& j, bool ok) {
  writeJson(c.out, j);
  std::cout << (ok ? "verified" : "NOT verified") << "\n";
  return ok ? 0 : 1;
}

int cmdCohomology(const Common& c, const std::string& gamma, const std::string& modelPath, int maxDeg, int level) {
  GroupModel m = modelPath.empty() ? GroupModel::named(gamma, level) : GroupModel::fromJson(readJson(modelPath));
  auto rep = groupCohomology(m, maxDeg, m.level);
  std::cout << "s    dim\n";
  for (std::size_t s = 0; s < rep.dims.size(); ++s) std::cout << s << "    " << rep.dims[s] << "\n";
  return finish(c, rep.toJson(), rep.stable);
}

int cmdCupTable(const Common& c, int level, int ell) {
  auto mk = [](int L) { return makeContext(ringF2(), FiniteGroup::realize(GroupModel::named("Z2xZ2", L))); };
  auto ctx = mk(level), ctx2 = mk(level + 1);
  LevelCohomology H(ctx, 3), H2(ctx2, 3);
  InflationMap inf(H, H2);
  const Zq& z = ctx->zq();
  std::map<QuadUnit, Vec> h;
  for (auto y : allQuadUnits()) h[y] = H.extensionClass(quadCharacter(y));
  auto stableZero = [&](const Vec& v) { return H2.isZero(2, inf.apply(2, v)); };
  Vec ll = H.cup(1, h[QuadUnit::Ell], 1, h[QuadUnit::Ell]);
  Vec lm = H.cup(1, h[QuadUnit::Ell], 1, h[QuadUnit::MinusOne]);
  bool ok = !stableZero(ll) && !stableZero(lm) && !stableZero(z.add(ll, lm));
  json rows = json::array();
  std::cout << "a    b    [l.l, l.-1]  zero  functional  symbol\n";
  for (auto a : allQuadUnits())
    for (auto b : allQuadUnits()) {
      Vec v = H.cup(1, h[a], 1, h[b]);
      int cx = -1, cy = -1;
      for (int x = 0; x < 2 && cx < 0; ++x)
        for (int y = 0; y < 2 && cx < 0; ++y) {
          Vec t = v;
          if (x) t = z.add(t, ll);
          if (y) t = z.add(t, lm);
          if (stableZero(t)) cx = x, cy = y;
        }
      int phi = cx < 0 ? -1 : (cx + cy) % 2;
      int symbol = hilbertSymbol(ell, a, b);
      bool agrees = phi >= 0 && (phi == 1) == (symbol == -1);
      ok = ok && agrees;
      rows.push_back({{"a", quadUnitName(a)}, {"b", quadUnitName(b)}, {"coords", {cx, cy}}, {"zero", stableZero(v)},
                      {"functional", phi}, {"hilbertSymbol", symbol}, {"agrees", agrees}});
      std::cout << quadUnitName(a) << std::string(5 - quadUnitName(a).size(), ' ') << quadUnitName(b)
                << std::string(5 - quadUnitName(b).size(), ' ') << "[" << cx << ", " << cy << "]       "
                << (stableZero(v) ? "yes" : "no ") << "   " << phi << "           " << symbol << "\n";
    }
  return finish(c, {{"level", level}, {"ell", ell}, {"basis", {"l.l", "l.-1"}}, {"table", rows}, {"ok", ok}}, ok);
}

int cmdExt1(const Common& c, const std::vector<std::string>& ys, int level, int bottom) {
  bool ok = true;
  json rows = json::array();
  for (auto y : unitsFrom(ys)) {
    auto make = [y](CtxPtr ctx) {
      Complex V = complexV(ctx, y);
      return std::make_pair(V, V);
    };
    auto r = hyperExt(make, ringF2(), GroupModel::named("Z2xZ2", level), level, 1, bottom);
    ok = ok && r.stable;
    json j = r.toJson();
    j["y"] = quadUnitName(y);
    rows.push_back(j);
    std::cout << "y = " << quadUnitName(y) << ": dim Ext^1 = " << r.dim << (r.stable ? "" : " (unstable)") << "\n";
  }
  return finish(c, rows, ok);
}

int cmdTangent(const Common& c, const std::vector<std::string>& ys, int ell) {
  bool ok = true;
  json rows = json::array();
  for (auto y : unitsFrom(ys)) {
    auto t = tangentSpace(buildVy(y, ell));
    ok = ok && t.powerOfTwo;
    rows.push_back(t.toJson());
    std::cout << "y = " << quadUnitName(y) << ": " << t.count << " classes over k[e], dim " << t.dim << "\n";
  }
  return finish(c, rows, ok);
}

int cmdVersal(const Common& c, const std::vector<std::string>& ys, const std::vector<std::string>& ringNames, int ell) {
  std::vector<RingPtr> rings;
  for (const auto& n : ringNames) rings.push_back(ringByName(n));
  if (rings.empty()) rings = defaultTestRings();
  bool ok = true;
  json rows = json::array();
  for (auto y : unitsFrom(ys)) {
    auto rep = verifyVersality(buildVy(y, ell), rings);
    ok = ok && rep.ok;
    rows.push_back(rep.toJson());
    for (const auto& r : rep.rows)
      std::cout << "y = " << quadUnitName(y) << "  " << r.ring << ": " << r.classes << " classes, " << r.hit << " hit, "
                << (r.surjective ? "surjective" : "NOT surjective") << (r.bijective ? ", bijective" : "")
                << ", lambda!=0 missed by R^fl: " << r.nonProflatMissedByFl << "\n";
  }
  return finish(c, rows, ok);
}

int cmdPerfect(const Common& c, const std::string& input, const std::string& sample, std::uint64_t seed, int level,
               const std::string& tracePath) {
  Complex P;
  int n1 = 0, n2 = 0;
  json meta;
  if (!input.empty()) {
    json j = readJson(input);
    auto ctx = makeContext(Ring::fromJson(j.at("ring")), FiniteGroup::realize(GroupModel::fromJson(j.at("group"))));
    P = Complex::fromJson(ctx, j.at("complex"));
    n1 = j.at("n1").get<int>();
    n2 = j.at("n2").get<int>();
    meta = {{"input", input}};
  } else {
    if (sample.size() != 1) throw std::invalid_argument("--sample must be A or B");
    auto s = randomSample(sample[0], seed);
    P = sampleInput(s, level);
    n1 = s.n1;
    n2 = s.n2;
    meta = s.toJson();
    meta["inputLevel"] = level;
  }
  auto t0 = std::chrono::steady_clock::now();
  auto r = perfect(P, n1, n2);
  log("perfect took " + std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) + "s");
  bool replayed = r.ok && replayTrace(r.trace.toJson()).ok;
  bool ok = r.ok && replayed && r.aFree && r.supportOk;
  json j = r.toJson();
  j["sample"] = meta;
  j["replayed"] = replayed;
  writeJson(tracePath, r.trace.toJson());
  std::cout << "n1 = " << n1 << ", n2 = " << n2 << "\n";
  if (!r.ok) std::cout << "failure: " << r.failure << "\n";
  for (const auto& l : r.trace.legs)
    std::cout << "leg " << l.stage << " (" << (l.forward ? "forward" : "backward") << "): "
              << (l.cert.ok ? "certificate verified" : "certificate FAILED") << "\n";
  std::cout << "A-ranks:";
  for (long k : r.aRanks) std::cout << " " << k;
  std::cout << "\nA-free: " << (r.aFree ? "yes" : "no") << ", support in [n1, n2]: " << (r.supportOk ? "yes" : "no")
            << ", replay: " << (replayed ? "ok" : "failed") << "\n";
  return finish(c, j, ok);
}

int cmdVerifyTrace(const Common& c, const std::string& path) {
  auto rep = replayTrace(readJson(path));
  if (rep.ok)
    std::cout << "trace replayed: every leg verified\n";
  else
    std::cout << "failing leg " << rep.failingLeg << ": " << rep.reason << "\n";
  return finish(c, rep.toJson(), rep.ok);
}

int cmdWeierstrass(const Common& c, const std::string& ringName, const std::string& coeffs, int precision,
                   const std::string& dividend) {
  RingPtr A = ringByName(ringName);
  auto series = [&](const std::string& text) {
    std::vector<Elem> cs;
    for (const auto& e : json::parse(text)) cs.push_back(parseElem(*A, e));
    return TruncatedSeries::fromCoeffs(A, precision, cs);
  };
  auto f = series(coeffs);
  auto w = weierstrass(f);
  std::vector<Elem> hc(w.h);
  auto back = TruncatedSeries::fromCoeffs(A, precision, hc).mul(w.u);
  bool ok = back.equal(f) && w.u.degree() >= 0 && A->isUnit(w.u.c[0]);
  json hj = json::array(), uj = json::array();
  for (const auto& e : w.h) hj.push_back(A->format(e));
  for (const auto& e : w.u.c) uj.push_back(A->format(e));
  json j = {{"ring", A->name()}, {"precision", precision}, {"degree", w.n}, {"h", hj}, {"u", uj}, {"product", back.equal(f)}};
  std::cout << "f = " << f.format() << "\nh = " << TruncatedSeries::fromCoeffs(A, precision, w.h).format()
            << "\nu = " << w.u.format() << "\n";
  if (!dividend.empty()) {
    auto g = series(dividend);
    auto [q, r] = weierstrassDivide(g, f);
    bool identity = q.mul(f).add(TruncatedSeries::fromCoeffs(A, precision, r)).equal(g);
    ok = ok && identity && static_cast<int>(r.size()) == w.n;
    json rj = json::array();
    for (const auto& e : r) rj.push_back(A->format(e));
    j["division"] = {{"q", q.format()}, {"r", rj}, {"identity", identity}};
    std::cout << "g = q f + r with q = " << q.format() << ", r = " << TruncatedSeries::fromCoeffs(A, precision, r).format()
              << "\n";
  }
  j["ok"] = ok;
  return finish(c, j, ok);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cohomology, deformations and perfect complexes over finite group algebras"};
  app.require_subcommand(1);
  Common common;

  std::string gamma = "Z2xZ2", model;
  int maxDeg = 3, level = 2;
  auto* coh = app.add_subcommand("cohomology", "dimensions of H^s(G, F2)");
  coh->add_option("--gamma", gamma, "Z2xZ2, Z/2 or Z2");
  coh->add_option("--model", model, "group model JSON file (overrides --gamma)");
  coh->add_option("--max", maxDeg, "largest degree");
  coh->add_option("--level", level, "truncation level");

  int cupLevel = 3, ell = 3;
  auto* cup = app.add_subcommand("cup-table", "h_a u h_b for a, b in {l, -1, -l}");
  cup->add_option("--level", cupLevel, "truncation level (compared one level up)");
  cup->add_option("--ell", ell, "prime for the Hilbert symbol comparison");

  std::vector<std::string> ys;
  int extLevel = 2, bottom = -4;
  auto* ext = app.add_subcommand("ext1", "dim Ext^1(V_y, V_y)");
  ext->add_option("--y", ys, "l, -l or -1 (default: all)");
  ext->add_option("--level", extLevel, "first truncation level");
  ext->add_option("--bottom", bottom, "resolve down to this degree");

  auto* tan = app.add_subcommand("tangent", "lift classes over the dual numbers");
  tan->add_option("--y", ys, "l, -l or -1 (default: all)");
  tan->add_option("--ell", ell, "prime congruent to 3 mod 4");

  std::vector<std::string> rings;
  auto* ver = app.add_subcommand("versal-check", "surjectivity of the versal presentations");
  ver->add_option("--y", ys, "l, -l or -1 (default: all)");
  ver->add_option("--ring", rings, "test rings (default: all default rings)");
  ver->add_option("--ell", ell, "prime congruent to 3 mod 4");

  std::string input, sample, tracePath;
  std::uint64_t seed = 1;
  int sampleLevel = 2;
  auto* per = app.add_subcommand("perfect", "perfect complex with verified trace");
  per->add_option("--input", input, "JSON with ring, group, complex, n1, n2");
  per->add_option("--sample", sample, "random sample of case A or B");
  per->add_option("--seed", seed, "sample seed");
  per->add_option("--level", sampleLevel, "level the sample is inflated to");
  per->add_option("--trace", tracePath, "write the pipeline trace here");

  std::string verifyPath;
  auto* vt = app.add_subcommand("verify-trace", "replay a pipeline trace");
  vt->add_option("trace", verifyPath, "trace JSON")->required();

  std::string ringName = "Z4", coeffs, dividend;
  int precision = 8;
  auto* wei = app.add_subcommand("weierstrass", "factor f = h u with h distinguished");
  wei->add_option("--ring", ringName, "F2, Z4, Z8, dual, F2u3, Z4u or a JSON file");
  wei->add_option("--coeffs", coeffs, "JSON array of coefficients, low degree first")->required();
  wei->add_option("--precision", precision, "truncation degree");
  wei->add_option("--divide", dividend, "also divide this series by f");

  for (auto* sub : app.get_subcommands({})) sub->add_option("--out", common.out, "write the JSON result to this file");
  CLI11_PARSE(app, argc, argv);

  try {
    if (*coh) return cmdCohomology(common, gamma, model, maxDeg, level);
    if (*cup) return cmdCupTable(common, cupLevel, ell);
    if (*ext) return cmdExt1(common, ys, extLevel, bottom);
    if (*tan) return cmdTangent(common, ys, ell);
    if (*ver) return cmdVersal(common, ys, rings, ell);
    if (*per) {
      if (input.empty() == sample.empty()) throw std::invalid_argument("give exactly one of --input and --sample");
      return cmdPerfect(common, input, sample, seed, sampleLevel, tracePath);
    }
    if (*vt) return cmdVerifyTrace(common, verifyPath);
    if (*wei) return cmdWeierstrass(common, ringName, coeffs, precision, dividend);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
