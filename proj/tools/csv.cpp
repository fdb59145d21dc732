#include "csv.hpp"

#include <cstdio>
#include <string>

namespace trackctl::cli {

namespace {

std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void column_group(std::ostream& out, const char* stem, std::size_t count) {
    for (std::size_t j = 0; j < count; ++j) {
        out << ',' << stem << '_' << j;
    }
}

void value_group(std::ostream& out, const Matrix& column) {
    for (std::size_t j = 0; j < column.rows(); ++j) {
        out << ',' << num17(column(j, 0));
    }
}

}  // namespace

void emit_csv(const Trajectory& traj, std::ostream& out, const Certificate* cert) {
    const std::size_t n = traj.plant.n();
    const std::size_t nm = traj.reference.nm();
    const std::size_t m = traj.plant.m();
    const std::size_t p = traj.plant.p();

    out << 'i';
    column_group(out, "x", n);
    column_group(out, "xm", nm);
    column_group(out, "xt", n);
    column_group(out, "u", m);
    column_group(out, "y", p);
    column_group(out, "ym", p);
    out << ",e_norm,V,dV,cert_bound\n";

    for (const StepRecord& rec : traj.steps) {
        out << rec.i;
        value_group(out, rec.x);
        value_group(out, rec.xm);
        value_group(out, rec.xtilde);
        value_group(out, rec.u);
        value_group(out, rec.y);
        value_group(out, rec.ym);
        out << ',' << num17(rec.e_norm) << ',' << num17(rec.v) << ',';
        if (rec.dv) {
            out << num17(*rec.dv);
        }
        out << ',';
        if (cert && rec.i >= cert->onset) {
            out << num17(cert->bound_at(rec.i));
        }
        out << '\n';
    }
}

}  // namespace trackctl::cli
