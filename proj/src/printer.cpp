#include "specmc/printer.hpp"

#include <sstream>

#include <json.hpp>

namespace specmc {

namespace {

// Surface rendering of a (normalized) command.  Internal wrappers never
// appear in parsed programs, so this covers the surface constructs only.
void print_cmd(const CmdPtr& c, std::ostringstream& out, int indent);

void print_indent(std::ostringstream& out, int indent) {
  for (int i = 0; i < indent; ++i) out << "  ";
}

bool is_single_action(const CmdPtr& c) {
  const auto* p = std::get_if<Command::Prefix>(&c->node);
  return p != nullptr && is_skip(p->rest);
}

void print_cmd(const CmdPtr& c, std::ostringstream& out, int indent) {
  struct Printer {
    std::ostringstream& out;
    int indent;
    void operator()(const Command::Skip&) const { out << "skip"; }
    void operator()(const Command::Prefix& n) const {
      out << to_string(n.act);
      if (!is_skip(n.rest)) {
        out << (n.strict ? " ;;\n" : " ;\n");
        print_indent(out, indent);
        print_cmd(n.rest, out, indent);
      }
    }
    void operator()(const Command::Choice& n) const {
      out << "(";
      print_cmd(n.left, out, indent);
      out << ") |~| (";
      print_cmd(n.right, out, indent);
      out << ")";
    }
    void operator()(const Command::If& n) const {
      out << "if " << to_string(n.cond) << " then ";
      print_cmd(n.then_cmd, out, indent + 1);
      if (!is_skip(n.else_cmd)) {
        out << " else ";
        print_cmd(n.else_cmd, out, indent + 1);
      }
      out << " fi";
    }
    void operator()(const Command::While& n) const {
      out << "while " << to_string(n.cond) << " do ";
      print_cmd(n.body, out, indent + 1);
      out << " od";
      if (!is_skip(n.cont)) {
        out << " ;\n";
        print_indent(out, indent);
        print_cmd(n.cont, out, indent);
      }
    }
    void operator()(const Command::Seq& n) const {
      out << "(";
      print_cmd(n.first, out, indent);
      out << (n.strict ? ") ;; (" : ") ; (");
      print_cmd(n.second, out, indent);
      out << ")";
    }
    void operator()(const Command::Speculate&) const {
      throw Diagnostic("internal speculation node has no surface syntax");
    }
    void operator()(const Command::Interrupt&) const {
      throw Diagnostic("internal pre-execution node has no surface syntax");
    }
    void operator()(const Command::Buffer&) const {
      throw Diagnostic("internal buffer node has no surface syntax");
    }
    void operator()(const Command::Locals&) const {
      throw Diagnostic("internal locals node has no surface syntax");
    }
  };
  std::visit(Printer{out, indent}, c->node);
}

}  // namespace

std::string program_text(const Program& prog) {
  std::ostringstream out;
  out << "globals {\n";
  for (const auto& d : prog.globals) {
    out << "  ";
    if (d.is_alias) {
      out << "alias " << d.name << " = " << d.alias_base << "["
          << d.alias_index << "]";
      if (!d.init.empty() && d.init[0] != 0) out << " = " << d.init[0];
    } else if (d.is_array) {
      out << d.name << "[" << d.size << "] = [";
      for (std::size_t i = 0; i < d.init.size(); ++i) {
        if (i) out << ", ";
        out << d.init[i];
      }
      out << "]";
    } else {
      out << d.name << " = " << d.init[0];
    }
    out << "\n";
  }
  out << "}\n";
  for (const auto& p : prog.procs) {
    out << "process " << p.name << " {\n  locals {";
    for (const auto& [r, v] : p.regs) out << " " << r << " = " << v;
    out << " }\n  code {\n    ";
    print_cmd(p.code, out, 2);
    out << "\n  }\n}\n";
  }
  return out.str();
}

std::string trace_text(const Trace& t, const Program& prog) {
  std::ostringstream out;
  for (const auto& s : t) out << to_string(s, prog) << "\n";
  return out.str();
}

std::string cache_text(const MemoryImage& img, const AddressMap& amap) {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < img.cache.size(); ++i) {
    if (i) out << ", ";
    out << amap.name_of(img.cache[i]);
  }
  out << "}";
  return out.str();
}

std::string finals_text(const MemoryImage& img, const Program& prog) {
  std::ostringstream out;
  bool sep = false;
  for (const auto& d : prog.globals) {
    if (sep) out << " ";
    sep = true;
    if (d.is_array) {
      out << d.name << "=[";
      for (Value i = 0; i < d.size; ++i) {
        if (i) out << ",";
        out << img.data.at(static_cast<std::size_t>(
            prog.amap.addr_of(d.name, i)));
      }
      out << "]";
    } else {
      out << d.name << "="
          << img.data.at(static_cast<std::size_t>(
                 prog.amap.addr_of(d.name, std::nullopt)));
    }
  }
  return out.str();
}

std::string run_jsonl(const RunResult& run, const Program& prog) {
  nlohmann::json rec;
  rec["labels"] = nlohmann::json::array();
  for (const auto& s : run.trace) {
    rec["labels"].push_back(to_string(s, prog));
  }
  nlohmann::json finals = nlohmann::json::object();
  for (const auto& d : prog.globals) {
    if (d.is_array) {
      nlohmann::json arr = nlohmann::json::array();
      for (Value i = 0; i < d.size; ++i) {
        arr.push_back(run.finals.data.at(
            static_cast<std::size_t>(prog.amap.addr_of(d.name, i))));
      }
      finals[d.name] = std::move(arr);
    } else {
      finals[d.name] = run.finals.data.at(static_cast<std::size_t>(
          prog.amap.addr_of(d.name, std::nullopt)));
    }
  }
  for (std::size_t i = 0; i < prog.procs.size() && i < run.regs.size(); ++i) {
    for (const auto& [r, v] : run.regs[i]) {
      finals[prog.procs[i].name + "." + r] = v;
    }
  }
  rec["finals"] = std::move(finals);
  rec["cache"] = nlohmann::json::array();
  for (Addr a : run.finals.cache) {
    rec["cache"].push_back(prog.amap.name_of(a));
  }
  return rec.dump();
}

}  // namespace specmc
