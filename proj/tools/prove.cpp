// prove: command-line front end (script runner, REPL, JSON session server).

#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bri/error.hpp"
#include "bri/parser.hpp"
#include "bri/session.hpp"

namespace {

int exit_code(const bri::Session& s) {
  auto v = s.verdict();
  return v == bri::Verdict::Proved || v == bri::Verdict::Refuted ? 0 : 1;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw bri::Error("io", "cannot read " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

void serve_stream(bri::Session& s, std::istream& in, std::ostream& out) {
  out << s.hello_json() << "\n" << std::flush;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    bool quit = false;
    out << s.handle_json(line, &quit) << "\n" << std::flush;
    if (quit) break;
  }
}

int serve_socket(bri::Session& s, const std::string& path) {
  int fd = socket(AF_UNIX, SOCK_STREAM, 0);
  if (fd < 0) return 2;
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  if (path.size() >= sizeof(addr.sun_path)) {
    std::cerr << "socket path too long\n";
    return 2;
  }
  std::snprintf(addr.sun_path, sizeof(addr.sun_path), "%s", path.c_str());
  unlink(path.c_str());
  if (bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 || listen(fd, 1) != 0) {
    std::cerr << "cannot listen on " << path << "\n";
    close(fd);
    return 2;
  }
  int conn = accept(fd, nullptr, nullptr);
  if (conn < 0) {
    close(fd);
    return 2;
  }
  auto send_line = [&](const std::string& text) {
    std::string t = text + "\n";
    std::size_t off = 0;
    while (off < t.size()) {
      ssize_t n = write(conn, t.data() + off, t.size() - off);
      if (n <= 0) return false;
      off += static_cast<std::size_t>(n);
    }
    return true;
  };
  send_line(s.hello_json());
  std::string pending;
  char buf[4096];
  bool quit = false;
  while (!quit) {
    ssize_t n = read(conn, buf, sizeof(buf));
    if (n <= 0) break;
    pending.append(buf, static_cast<std::size_t>(n));
    std::size_t nl;
    while (!quit && (nl = pending.find('\n')) != std::string::npos) {
      std::string line = pending.substr(0, nl);
      pending.erase(0, nl + 1);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      if (!send_line(s.handle_json(line, &quit))) quit = true;
    }
  }
  close(conn);
  close(fd);
  unlink(path.c_str());
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded rewriting induction prover for constrained higher-order rewriting"};
  std::string system_path, script_path, smt_cmd, socket_path, transcript_path;
  std::vector<std::string> goals;
  bool gc = false, trust_qr = false, trust_term = false, trust_gc = false, serve = false, quiet = false;
  double timeout = 0;
  app.add_option("system", system_path, "system file")->required();
  app.add_option("--goal", goals, "goal equation 's == t [phi]' (repeatable; default: the file's goals)");
  app.add_option("--script", script_path, "proof script to run");
  app.add_flag("--ground-confluence", gc, "prove ground confluence from the critical peaks");
  app.add_flag("--trust-quasi-reductive", trust_qr, "assume the system is quasi-reductive");
  app.add_flag("--trust-termination", trust_term, "assume termination of the rules and requirements");
  app.add_flag("--trust-ground-confluence", trust_gc, "assume ground confluence for disprove and axioms");
  app.add_option("--smt-cmd", smt_cmd, "SMT solver command line (default: z3 -in -smt2)");
  app.add_option("--timeout", timeout, "SMT timeout per query in seconds");
  app.add_flag("--serve", serve, "JSON session protocol on stdin/stdout");
  app.add_option("--socket", socket_path, "JSON session protocol on a local socket (implies --serve)");
  app.add_option("--transcript", transcript_path, "write the transcript here on exit");
  app.add_flag("-q,--quiet", quiet, "print only the final state and verdict");
  CLI11_PARSE(app, argc, argv);

  try {
    bri::SmtConfig cfg = bri::SmtConfig::from_environment();
    if (!smt_cmd.empty()) cfg.command = smt_cmd;
    if (timeout > 0) cfg.timeout_ms = static_cast<int>(timeout * 1000);
    bri::SmtSolver smt(cfg);

    bri::RewriteSystem sys = bri::load_system(system_path);
    for (const auto& w : sys.warnings()) std::cerr << "warning: " << w << "\n";
    bri::SessionOptions opts;
    opts.trust_quasi_reductive = trust_qr;
    opts.trust_termination = trust_term;
    opts.trust_ground_confluence = trust_gc;
    opts.system_name = system_path;
    std::vector<bri::Equation> eqs;
    if (!goals.empty()) {
      for (const auto& g : goals) {
        bri::Scope sc;
        eqs.push_back(bri::parse_equation(g, sys, sc));
      }
    } else {
      eqs = sys.goals();
    }
    bri::Session session(std::move(sys), smt, opts);
    if (gc) {
      session.start_ground_confluence();
      if (!quiet && !serve && socket_path.empty()) {
        std::cout << session.peaks().size() << " critical peak(s)\n";
        for (const auto& p : session.peaks())
          std::cout << "  " << bri::show(p) << " from " << p.rule1 << "/" << p.rule2 << " at " << bri::to_string(p.pos) << "\n";
      }
    } else {
      session.start(eqs);
    }

    if (!socket_path.empty()) return serve_socket(session, socket_path);
    if (serve) {
      serve_stream(session, std::cin, std::cout);
      return exit_code(session);
    }

    int rc = 0;
    if (!script_path.empty()) {
      bri::CommandResult r = session.run_script(read_file(script_path));
      if (!quiet) std::cout << r.output;
      if (!r.ok) {
        std::cerr << "error: " << r.error_code << ": " << r.error << "\n";
        rc = 2;
      }
    } else {
      bool tty = isatty(0);
      if (tty) std::cout << session.render(false) << "> " << std::flush;
      std::string line;
      while (std::getline(std::cin, line)) {
        bri::CommandResult r = session.execute(line);
        if (!quiet || !r.ok) std::cout << r.output;
        if (r.steps > 0 && tty) std::cout << session.render(false);
        if (r.quit) break;
        if (tty) std::cout << "> " << std::flush;
      }
    }
    if (rc == 0 && session.state().eqs.empty() && session.verdict() == bri::Verdict::AwaitingCheck &&
        !session.state().refuted) {
      bri::CommandResult r = session.execute(":check");
      std::cout << r.output;
    }
    std::cout << session.render(false);
    std::cout << "verdict: " << bri::to_string(session.verdict()) << "\n";
    if (!transcript_path.empty()) {
      std::ofstream f(transcript_path);
      f << session.transcript();
    }
    return rc != 0 ? rc : exit_code(session);
  } catch (const bri::Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.detail() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
