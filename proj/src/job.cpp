#include "fbx/job.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <utility>

#include "fbx/expr.hpp"

namespace fbx {

namespace {

std::string join_errors(const std::vector<std::string>& errs) {
  std::string msg = "invalid job:";
  for (const auto& e : errs) msg += "\n  - " + e;
  return msg;
}

void reject_unknown(const Json& obj, const std::set<std::string>& known,
                    const std::string& where, std::vector<std::string>& errs) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) errs.push_back(where + ": unknown field '" + it.key() + "'");
  }
}

std::vector<LocalCohomology> boundary_data(const Connection& e, const JobSpec& job) {
  std::vector<LocalCohomology> out;
  for (const DivisorPoint& p : boundary_points(e.curve)) {
    LocalConnection l = restrict(e, p);
    if (job.truncation > 0) {
      out.push_back(LocalCohomology{p, e.rank, job.truncation, false,
                                    local_h0(l, job.truncation), local_h1(l, job.truncation)});
    } else {
      out.push_back(stabilized_cohomology(l, job.max_truncation));
    }
  }
  return out;
}

Json boundary_json(const std::vector<LocalCohomology>& bd, const std::string& filter) {
  Json arr = Json::array();
  for (const auto& lc : bd) {
    if (!filter.empty() && lc.point.str() != filter) continue;
    Json entry;
    entry["point"] = lc.point.str();
    entry["h0"] = lc.h0_dim();
    entry["h1"] = lc.h1_dim();
    entry["truncation"] = lc.truncation_used;
    entry["stabilized"] = lc.stabilized;
    arr.push_back(std::move(entry));
  }
  return arr;
}

Json matrix_json(const MatQ& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json pairing_json(const MatQ& m) {
  Json p;
  p["rows"] = static_cast<int>(m.rows());
  p["cols"] = static_cast<int>(m.cols());
  int rank = mat_rank(m);
  p["rank"] = rank;
  p["full_rank"] = rank == m.rows() && rank == m.cols();
  p["entries"] = matrix_json(m);
  return p;
}

Json euler_json(const GlobalH& g, const std::vector<LocalCohomology>& bd, const CompactH& c) {
  int bh0 = 0, bh1 = 0;
  for (const auto& lc : bd) {
    bh0 += lc.h0_dim();
    bh1 += lc.h1_dim();
  }
  Json eu;
  eu["chi_X"] = g.h0_dim() - g.h1_dim();
  eu["chi_boundary"] = bh0 - bh1;
  eu["chi_c"] = c.h0_dim() - c.h1_dim() + c.h2_dim();
  std::vector<int> les{c.h0_dim(), g.h0_dim(), bh0, c.h1_dim(), g.h1_dim(), bh1, c.h2_dim()};
  eu["les_dims"] = les;
  int alt = 0, sign = 1;
  for (int d : les) {
    alt += sign * d;
    sign = -sign;
  }
  eu["les_exact"] = alt == 0;
  return eu;
}

RegFun parse_form_flag(const std::string& text) {
  std::string s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.size() < 2 || s.substr(s.size() - 2) != "dt")
    throw JobError({"--form must end with 'dt'"});
  return parse_regfun(s.substr(0, s.size() - 2));
}

Json stage_dims_json(const RefinedCompact& rc) {
  Json j;
  j["twist"] = rc.twist;
  j["h0c_stages"] = rc.h0c.stage_dims;
  j["h1c_stages"] = rc.h1c.stage_dims;
  return j;
}

}  // namespace

JobError::JobError(std::vector<std::string> errs)
    : std::runtime_error(join_errors(errs)), errors(std::move(errs)) {}

Connection JobSpec::connection() const {
  std::vector<std::vector<RegFun>> m(static_cast<size_t>(rank),
                                     std::vector<RegFun>(static_cast<size_t>(rank)));
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) m[i][j] = parse_regfun(matrix_text[i][j]);
  return Connection(curve, rank, std::move(m));
}

bool JobSpec::operator==(const JobSpec& o) const {
  return curve == o.curve && rank == o.rank && matrix_text == o.matrix_text &&
         truncation == o.truncation && max_truncation == o.max_truncation &&
         depth == o.depth && format == o.format;
}

JobSpec parse_job(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw JobError({std::string("malformed JSON: ") + ex.what()});
  }
  std::vector<std::string> errs;
  JobSpec job;
  if (!doc.is_object()) {
    throw JobError({"job document must be a JSON object"});
  }
  reject_unknown(doc, {"curve", "connection", "options"}, "job", errs);

  if (!doc.contains("curve") || !doc["curve"].is_object()) {
    errs.push_back("curve: required object");
  } else {
    const Json& cv = doc["curve"];
    reject_unknown(cv, {"finite_points", "include_infinity"}, "curve", errs);
    if (cv.contains("include_infinity") &&
        (!cv["include_infinity"].is_boolean() || cv["include_infinity"] != true)) {
      errs.push_back("curve.include_infinity: must be true (infinity is always removed)");
    }
    if (!cv.contains("finite_points") || !cv["finite_points"].is_array()) {
      errs.push_back("curve.finite_points: required array");
    } else {
      std::vector<Rat> pts;
      for (const Json& v : cv["finite_points"]) {
        try {
          if (v.is_string()) {
            pts.push_back(rat_from_string(v.get<std::string>()));
          } else if (v.is_number_integer()) {
            pts.push_back(Rat(static_cast<long>(v.get<long long>())));
          } else {
            errs.push_back("curve.finite_points: entries must be rational strings or integers");
          }
        } catch (const std::invalid_argument& ex) {
          errs.push_back(std::string("curve.finite_points: ") + ex.what());
        }
      }
      std::vector<Rat> unique;
      for (const Rat& p : pts) {
        if (std::find(unique.begin(), unique.end(), p) != unique.end()) {
          errs.push_back("curve.finite_points: duplicate point " + to_string(p));
        } else {
          unique.push_back(p);
        }
      }
      job.curve = CurveSpec(std::move(unique));
    }
  }

  if (!doc.contains("connection") || !doc["connection"].is_object()) {
    errs.push_back("connection: required object");
  } else {
    const Json& cn = doc["connection"];
    reject_unknown(cn, {"rank", "matrix"}, "connection", errs);
    if (!cn.contains("rank") || !cn["rank"].is_number_integer() || cn["rank"].get<int>() < 1) {
      errs.push_back("connection.rank: required positive integer");
    } else {
      job.rank = cn["rank"].get<int>();
    }
    if (!cn.contains("matrix") || !cn["matrix"].is_array()) {
      errs.push_back("connection.matrix: required array of rows");
    } else if (job.rank > 0) {
      const Json& mat = cn["matrix"];
      if (static_cast<int>(mat.size()) != job.rank) {
        errs.push_back("connection.matrix: expected " + std::to_string(job.rank) +
                       " rows, got " + std::to_string(mat.size()));
      } else {
        for (int i = 0; i < job.rank; ++i) {
          const Json& row = mat[i];
          if (!row.is_array() || static_cast<int>(row.size()) != job.rank) {
            errs.push_back("connection.matrix: row " + std::to_string(i) + " must have " +
                           std::to_string(job.rank) + " entries");
            continue;
          }
          std::vector<std::string> trow;
          for (int j = 0; j < job.rank; ++j) {
            if (!row[j].is_string()) {
              errs.push_back("connection.matrix[" + std::to_string(i) + "][" +
                             std::to_string(j) + "]: must be an expression string");
              trow.push_back("0");
              continue;
            }
            std::string entry = row[j].get<std::string>();
            trow.push_back(entry);
            try {
              RegFun f = parse_regfun(entry);
              if (!f.poles_within(job.curve.finite_points)) {
                errs.push_back("connection.matrix[" + std::to_string(i) + "][" +
                               std::to_string(j) + "]: pole outside D in '" + entry + "'");
              }
            } catch (const ParseError& ex) {
              errs.push_back("connection.matrix[" + std::to_string(i) + "][" +
                             std::to_string(j) + "]: " + ex.what());
            }
          }
          job.matrix_text.push_back(std::move(trow));
        }
      }
    }
  }

  if (doc.contains("options")) {
    const Json& op = doc["options"];
    if (!op.is_object()) {
      errs.push_back("options: must be an object");
    } else {
      reject_unknown(op, {"truncation", "max_truncation", "depth", "format"}, "options", errs);
      auto read_int = [&](const char* key, int lo, int& dst) {
        if (!op.contains(key)) return;
        if (!op[key].is_number_integer() || op[key].get<int>() < lo) {
          errs.push_back(std::string("options.") + key + ": must be an integer >= " +
                         std::to_string(lo));
        } else {
          dst = op[key].get<int>();
        }
      };
      read_int("truncation", 0, job.truncation);
      read_int("max_truncation", 1, job.max_truncation);
      read_int("depth", 1, job.depth);
      if (op.contains("format")) {
        if (!op["format"].is_string() ||
            (op["format"] != "table" && op["format"] != "json")) {
          errs.push_back("options.format: must be \"table\" or \"json\"");
        } else {
          job.format = op["format"].get<std::string>();
        }
      }
    }
  }

  if (!errs.empty()) throw JobError(std::move(errs));
  return job;
}

Json job_to_json(const JobSpec& job) {
  Json j;
  Json pts = Json::array();
  for (const Rat& c : job.curve.finite_points) pts.push_back(to_string(c));
  j["curve"] = {{"finite_points", std::move(pts)}, {"include_infinity", true}};
  j["connection"] = {{"rank", job.rank}, {"matrix", job.matrix_text}};
  j["options"] = {{"truncation", job.truncation},
                  {"max_truncation", job.max_truncation},
                  {"depth", job.depth},
                  {"format", job.format}};
  return j;
}

std::string serialize_job(const JobSpec& job) { return job_to_json(job).dump(2) + "\n"; }

Json run_job(const std::string& command, const JobSpec& job, const RunOptions& opts) {
  Json rep;
  rep["schema_version"] = 1;
  rep["job"] = job_to_json(job);
  rep["h_X"] = nullptr;
  rep["h_boundary"] = nullptr;
  rep["h_c"] = nullptr;
  rep["pairings"] = nullptr;
  rep["euler"] = nullptr;
  rep["tate"] = nullptr;
  Json diag;
  diag["command"] = command;

  Connection e = job.connection();

  if (command == "cohomology" || command == "compact") {
    GlobalH g = global_h(e, opts.extra_doublings);
    std::vector<LocalCohomology> bd = boundary_data(e, job);
    CompactH c = compact_h(e, g, bd);
    rep["h_X"] = std::vector<int>{g.h0_dim(), g.h1_dim()};
    rep["h_boundary"] = boundary_json(bd, "");
    rep["h_c"] = std::vector<int>{c.h0_dim(), c.h1_dim(), c.h2_dim()};
    rep["euler"] = euler_json(g, bd, c);
    diag["global_rounds"] = g.rounds;
  } else if (command == "boundary") {
    std::vector<LocalCohomology> bd = boundary_data(e, job);
    rep["h_boundary"] = boundary_json(bd, opts.point);
  } else if (command == "duality") {
    BoundaryPairing bp = boundary_pairing(e);
    CompactPairing cp = duality_pairing_c(e);
    Json pr;
    pr["boundary_h0_vs_h1"] = pairing_json(bp.h0_vs_h1);
    pr["boundary_h1_vs_h0"] = pairing_json(bp.h1_vs_h0);
    pr["compact_h1c_vs_h1"] = pairing_json(cp.h1c_vs_h1);
    pr["compact_h2c_vs_h0"] = pairing_json(cp.h2c_vs_h0);
    rep["pairings"] = std::move(pr);
  } else if (command == "tangent") {
    TangentDims td = tangent_complex(e);
    FredholmReport fr = fredholm_check(e);
    diag["tangent"] = {{"t_minus_1", td.t_minus_1}, {"t_0", td.t_0}, {"t_1", td.t_1}};
    diag["fredholm"] = {{"fredholm", fr.fredholm},
                        {"end_h0", fr.end_h0},
                        {"end_h1", fr.end_h1},
                        {"rounds", fr.rounds}};
    diag["boundary_injective"] = injectivity_check(e);
  } else if (command == "residues") {
    RegFun w = parse_form_flag(opts.form);
    if (!w.poles_within(job.curve.finite_points)) throw JobError({"--form: pole outside D"});
    Json arr = Json::array();
    Rat sum(0);
    for (const DivisorPoint& p : boundary_points(job.curve)) {
      if (!opts.point.empty() && p.str() != opts.point) continue;
      Rat r = residue(restrict_form({w}, p, 2)[0]);
      sum += r;
      arr.push_back(Json{{"point", p.str()}, {"residue", to_string(r)}});
    }
    diag["residues"] = {{"per_point", std::move(arr)}, {"sum", to_string(sum)}};
  } else if (command == "tate") {
    RefinedCompact rc = refined_compact_coherent(opts.twist, job.curve, job.depth);
    SerreStageReport sr = serre_duality_stage_check(opts.twist, job.curve, job.depth);
    HodgePieces hp = hodge_pieces(e, job.depth);
    Json t;
    t["depth"] = job.depth;
    t["refined_compact"] = stage_dims_json(rc);
    t["serre_stage_check"] = {{"ok", sr.ok},
                              {"expected_h0", sr.expected_h0},
                              {"expected_h1", sr.expected_h1}};
    t["hodge"] = {{"stage_chi", hp.stage_chi},
                  {"chi_c", hp.chi_c},
                  {"piece0", stage_dims_json(hp.piece0)},
                  {"piece1", stage_dims_json(hp.piece1)}};
    rep["tate"] = std::move(t);
  } else {
    throw JobError({"unknown command '" + command + "'"});
  }

  rep["diagnostics"] = std::move(diag);
  return rep;
}

namespace {

std::string dims_line(const Json& dims) {
  std::string s = "[";
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ", ";
    s += dims[i].dump();
  }
  return s + "]";
}

}  // namespace

std::string report_tables(const Json& rep) {
  std::ostringstream out;
  if (!rep["h_X"].is_null()) out << "H(X)          " << dims_line(rep["h_X"]) << "\n";
  if (!rep["h_boundary"].is_null()) {
    for (const Json& b : rep["h_boundary"]) {
      out << "H(bd @ " << b["point"].get<std::string>() << ")   [" << b["h0"] << ", "
          << b["h1"] << "]  (truncation " << b["truncation"] << ")\n";
    }
  }
  if (!rep["h_c"].is_null()) out << "H_c(X)        " << dims_line(rep["h_c"]) << "\n";
  if (!rep["euler"].is_null()) {
    const Json& eu = rep["euler"];
    out << "chi           X " << eu["chi_X"] << ", boundary " << eu["chi_boundary"]
        << ", compact " << eu["chi_c"] << ", LES "
        << (eu["les_exact"].get<bool>() ? "exact" : "BROKEN") << "\n";
  }
  if (!rep["pairings"].is_null()) {
    for (auto it = rep["pairings"].begin(); it != rep["pairings"].end(); ++it) {
      const Json& p = it.value();
      out << "pairing " << it.key() << ": " << p["rows"] << "x" << p["cols"] << " rank "
          << p["rank"] << (p["full_rank"].get<bool>() ? " (full)" : " (DEGENERATE)") << "\n";
    }
  }
  if (!rep["tate"].is_null()) {
    const Json& t = rep["tate"];
    out << "tate stages   h0_c " << dims_line(t["refined_compact"]["h0c_stages"]) << " h1_c "
        << dims_line(t["refined_compact"]["h1c_stages"]) << "\n";
    out << "serre stages  " << (t["serre_stage_check"]["ok"].get<bool>() ? "ok" : "MISMATCH")
        << "\n";
    out << "hodge         stage chi " << t["hodge"]["stage_chi"] << " = chi_c "
        << t["hodge"]["chi_c"] << "\n";
  }
  const Json& diag = rep["diagnostics"];
  if (diag.contains("tangent")) {
    out << "tangent       [" << diag["tangent"]["t_minus_1"] << ", " << diag["tangent"]["t_0"]
        << ", " << diag["tangent"]["t_1"] << "]\n";
    out << "fredholm      " << (diag["fredholm"]["fredholm"].get<bool>() ? "yes" : "NO")
        << " (End H = [" << diag["fredholm"]["end_h0"] << ", " << diag["fredholm"]["end_h1"]
        << "])\n";
  }
  if (diag.contains("residues")) {
    for (const Json& r : diag["residues"]["per_point"]) {
      out << "res @ " << r["point"].get<std::string>() << "   "
          << r["residue"].get<std::string>() << "\n";
    }
    out << "res sum       " << diag["residues"]["sum"].get<std::string>() << "\n";
  }
  return out.str();
}

std::vector<std::string> selftest() {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  auto job = [](const std::string& text) { return parse_job(text); };

  const std::string a1 =
      R"({"curve":{"finite_points":[]},"connection":{"rank":1,"matrix":[["0"]]}})";
  const std::string gm =
      R"({"curve":{"finite_points":["0"]},"connection":{"rank":1,"matrix":[["0"]]}})";
  const std::string half =
      R"({"curve":{"finite_points":["0"]},"connection":{"rank":1,"matrix":[["1/2 * 1/t"]]}})";
  const std::string expo =
      R"({"curve":{"finite_points":["0"]},"connection":{"rank":1,"matrix":[["-1/t^2"]]}})";

  struct Golden {
    const std::string* text;
    std::vector<int> h_x, h_c;
  };
  for (const Golden& g : {Golden{&a1, {1, 0}, {0, 0, 1}}, Golden{&gm, {1, 1}, {0, 1, 1}},
                          Golden{&half, {0, 0}, {0, 0, 0}}, Golden{&expo, {0, 1}, {0, 1, 0}}}) {
    Json rep = run_job("cohomology", job(*g.text));
    expect(rep["h_X"].get<std::vector<int>>() == g.h_x, "h_X mismatch on " + *g.text);
    expect(rep["h_c"].get<std::vector<int>>() == g.h_c, "h_c mismatch on " + *g.text);
    expect(rep["euler"]["les_exact"].get<bool>(), "LES broken on " + *g.text);
  }

  Json du = run_job("duality", job(gm));
  for (auto it = du["pairings"].begin(); it != du["pairings"].end(); ++it) {
    expect(it.value()["full_rank"].get<bool>(), "degenerate pairing " + it.key());
  }

  RunOptions ro;
  ro.form = "(3*t + 1/2) / (t^2 - t) dt";
  Json rs = run_job("residues", job(R"({"curve":{"finite_points":["0","1"]},)"
                                   R"("connection":{"rank":1,"matrix":[["0"]]}})"),
                    ro);
  expect(rs["diagnostics"]["residues"]["sum"].get<std::string>() == "0",
         "global residues do not sum to zero");

  RunOptions to;
  to.twist = -2;
  Json tt = run_job("tate", job(a1), to);
  expect(tt["tate"]["serre_stage_check"]["ok"].get<bool>(), "serre stage check failed");
  expect(tt["tate"]["hodge"]["stage_chi"].get<int>() == 1, "hodge stage chi on A^1");

  return failures;
}

}  // namespace fbx
