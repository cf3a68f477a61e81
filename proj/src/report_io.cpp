#include "carnot/report_io.hpp"

#include <cmath>
#include <cstdio>

namespace carnot {

namespace {

using ojson = nlohmann::ordered_json;

ojson number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ojson pairs(const std::vector<std::pair<std::string, double>>& kv) {
  ojson o = ojson::object();
  for (const auto& [k, v] : kv) o[k] = number(v);
  return o;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string joined(const std::vector<std::pair<std::string, double>>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) out += ';';
    out += k + "=" + format_double(v);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ojson to_json(const BoundReport& r) {
  ojson o;
  o["kind"] = "bound";
  o["group"] = r.group;
  o["norm"] = r.norm;
  o["p"] = number(r.p);
  o["theta"] = number(r.theta);
  o["Q"] = number(r.Q);
  o["sup_z"] = number(r.sup_z);
  o["sup_method"] = r.sup_method;
  o["emitted"] = r.emitted;
  o["bound"] = r.emitted ? number(r.bound) : ojson(nullptr);
  o["branch"] = r.branch;
  ojson c = ojson::object();
  for (const auto& cc : r.conditions) c[cc.name] = cc.holds;
  o["conditions"] = c;
  o["known_upper"] = r.known_upper ? number(*r.known_upper) : ojson(nullptr);
  o["note"] = r.note;
  return o;
}

ojson to_json(const Report& r) {
  ojson o;
  o["kind"] = "check";
  o["check"] = r.check;
  o["pass"] = r.pass;
  o["values"] = pairs(r.values);
  o["bound"] = r.bound ? number(*r.bound) : ojson(nullptr);
  o["tolerance"] = number(r.tolerance);
  o["tolerance_kind"] = r.tolerance_kind;
  o["diagnostics"] = pairs(r.diagnostics);
  o["note"] = r.note;
  return o;
}

std::string render_json(const RunMeta& meta, const std::vector<Result>& results) {
  ojson doc;
  doc["meta"] = {{"version", kVersion}, {"seed", meta.seed}, {"config", meta.config}};
  ojson arr = ojson::array();
  for (const auto& r : results) std::visit([&](const auto& x) { arr.push_back(to_json(x)); }, r);
  doc["results"] = arr;
  return doc.dump(2) + "\n";
}

std::string render_csv(const std::vector<Result>& results) {
  std::string out =
      "kind,check,group,norm,p,theta,Q,sup_z,sup_method,bound,branch,pass,"
      "tolerance,tolerance_kind,values,diagnostics,note\n";
  for (const auto& res : results) {
    std::vector<std::string> f;
    if (const auto* b = std::get_if<BoundReport>(&res)) {
      std::string conds;
      for (const auto& c : b->conditions) {
        if (!conds.empty()) conds += ';';
        conds += c.name + "=" + (c.holds ? "1" : "0");
      }
      f = {"bound", "", b->group, b->norm, format_double(b->p), format_double(b->theta),
           format_double(b->Q), format_double(b->sup_z), b->sup_method,
           b->emitted ? format_double(b->bound) : "", b->branch, b->emitted ? "1" : "0",
           "", "", conds, "", b->note};
    } else {
      const auto& r = std::get<Report>(res);
      f = {"check", r.check, "", "", "", "", "", "", "",
           r.bound ? format_double(*r.bound) : "", "", r.pass ? "1" : "0",
           format_double(r.tolerance), r.tolerance_kind, joined(r.values),
           joined(r.diagnostics), r.note};
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out += ',';
      out += csv_field(f[i]);
    }
    out += '\n';
  }
  return out;
}

std::string render_profile_csv(const std::string& x_name, const std::string& y_name,
                               const std::vector<std::pair<double, double>>& rows) {
  std::string out = csv_field(x_name) + "," + csv_field(y_name) + "\n";
  for (const auto& [x, y] : rows) out += format_double(x) + "," + format_double(y) + "\n";
  return out;
}

bool result_passes(const Result& r) {
  if (const auto* rep = std::get_if<Report>(&r)) return rep->pass;
  return true;
}

}  // namespace carnot
