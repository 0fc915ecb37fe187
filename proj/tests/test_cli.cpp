#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + KERNELFORGE_CLI + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("sigma and kernel") {
  const Run s = run("sigma --space bidisk --alpha 0.5 --beta 0.3 --theta 1 --no-wall-time");
  CHECK(s.code == 0);
  const auto j = nlohmann::json::parse(s.out);
  CHECK(j["verdict"] == "pass");
  CHECK(j["items"][0]["item"] == "sigma");
  CHECK(j["items"][0]["value"][0].get<double>() == doctest::Approx(1.0 / 0.8347826086956522));
  CHECK_FALSE(j.contains("wall_time"));

  const Run k = run("kernel --space bidisk --theta 2 --alpha 0.5 --pair 0.3,0.1,0.2,-0.4 "
                    "--pair 0.5,0.5,-0.5,0.2,0.1,0,0.3,0.3 --oracle --no-wall-time");
  CHECK(k.code == 0);
  const auto kj = nlohmann::json::parse(k.out);
  CHECK(kj["items"].size() == 2);
  CHECK(kj["params"]["oracle_settled"] == true);

  // Quadrature-based oracle, kept cheap by a low degree near the origin.
  const Run q = run("kernel --space fock --theta 0.5 --pair 0.02,0.01,-0.01,0.02 --oracle "
                    "--oracle-degree 2 --no-wall-time");
  CHECK(q.code == 0);

  const Run n = run("norm-expand --space ball --alpha 0.5 --theta 1 --poly \"z1*z2 - z2^3\" "
                    "--oracle --format csv");
  CHECK(n.code == 0);
  CHECK(n.out.rfind("item,value_re,value_im,oracle_re,oracle_im,abs_err,rel_err\n", 0) == 0);
}

TEST_CASE("verify is deterministic") {
  const Run a = run("verify delta --no-wall-time");
  const Run b = run("verify delta --no-wall-time");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const Run c = run("verify delta --seed 8 --format csv");
  CHECK(c.code == 0);
}

TEST_CASE("points file") {
  const auto path = std::filesystem::temp_directory_path() / "kernelforge_points.txt";
  {
    std::ofstream f(path);
    f << "# z1,z2,w1,w2\n0.1,0.2,0.3,0.4\n\n0.0,0.5,-0.5,0.1\n";
  }
  const Run r = run("kernel --space bidisk --theta 0.5 --vartheta 0.5 --points " + path.string());
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["items"].size() == 2);
  std::filesystem::remove(path);
}

TEST_CASE("exit codes") {
  CHECK(run("").code == 64);
  CHECK(run("kernel --pair 0,0,0,0").code == 64);
  CHECK(run("kernel --space bidisk --pair 0,0,x,0").code == 64);
  CHECK(run("kernel --space bidisk").code == 64);
  CHECK(run("verify nonsense").code == 64);
  CHECK(run("sigma --space torus").code == 64);
  CHECK(run("kernel --space ball --vartheta 1 --pair 0,0,0,0").code == 64);

  CHECK(run("kernel --space bidisk --pair 1,0,0,0").code == 2);
  CHECK(run("sigma --space bidisk --alpha -1.5").code == 2);
  CHECK(run("sigma --space fock --alpha 0").code == 2);

  CHECK(run("sigma --space bidisk --vartheta 0.5 --beta 2", "KERNELFORGE_MAX_TERMS=20").code == 3);
  CHECK(run("kernel --space bidisk --theta 1 --pair 0.9,-0.9,0.9,-0.9").code == 3);

  // A degree-2 oracle is far from the kernel at this point.
  CHECK(run("kernel --space bidisk --theta 1 --pair 0.6,-0.6,0.6,-0.6 --oracle "
            "--oracle-degree 2")
            .code == 1);
}

TEST_CASE("gram cache") {
  const auto path = std::filesystem::temp_directory_path() / "kernelforge_gram.json";
  std::filesystem::remove(path);
  const std::string args = "kernel --space bidisk --theta 1 --pair 0.3,0.1,0.2,-0.4 --oracle "
                           "--oracle-degree 6 --no-wall-time --gram-cache " + path.string();
  const Run first = run(args);
  CHECK(first.code == 0);
  CHECK(std::filesystem::exists(path));
  const Run second = run(args);
  CHECK(second.out == first.out);

  // A singular cached block is reported as a conditioning failure.
  auto j = nlohmann::json::parse(std::ifstream(path));
  j["blocks"][1] = nlohmann::json::parse("[[1.0, 1.0], [1.0, 1.0]]");
  std::ofstream(path) << j.dump();
  CHECK(run(args).code == 4);
  std::filesystem::remove(path);
}

namespace {

double first_value(const Run& r, std::size_t item = 0) {
  return nlohmann::json::parse(r.out)["items"][item]["value"][0].get<double>();
}

}  // namespace

TEST_CASE("reference values") {
  const Run k = run("kernel --space bidisk --pair 0.3,0.2,0.1,0.4 --no-wall-time");
  CHECK(k.code == 0);
  CHECK(first_value(k) == doctest::Approx(1.0 / std::pow(0.97 * 0.92, 2.0)).epsilon(1e-12));

  const Run f = run("kernel --space fock --pair 0,0,0,0 --no-wall-time");
  CHECK(f.code == 0);
  CHECK(first_value(f) == doctest::Approx(1.0));

  CHECK(run("kernel --space ball --alpha 0.5 --pair 0.2,0.1,0.3,-0.2 --oracle").code == 0);

  const Run d = run("norm-expand --space bidisk --poly \"z1 - z2\" --no-wall-time");
  CHECK(d.code == 0);
  CHECK(first_value(d, 0) == 0.0);
  CHECK(first_value(d, 1) == doctest::Approx(1.0));
  CHECK(first_value(run("norm-expand --space fock --poly 1"), 1) == doctest::Approx(1.0));
  CHECK(first_value(run("norm-expand --space ball --poly z2"), 2) == doctest::Approx(1.0 / 6.0));

  CHECK(first_value(run("sigma --space bidisk")) == doctest::Approx(1.0));
  CHECK(first_value(run("sigma --space bidisk --theta 1")) == doctest::Approx(1.0));
  CHECK(first_value(run("sigma --space fock --theta 1")) == doctest::Approx(0.5));

  CHECK(run("verify bidisk-core --no-wall-time").code == 0);
  CHECK(run("verify fock-cov --no-wall-time").code == 0);
}
