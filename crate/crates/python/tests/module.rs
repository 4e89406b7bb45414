use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::ffi::CString;
use std::sync::Once;

fn run(code: &str) {
    static INIT: Once = Once::new();
    INIT.call_once(|| {
        pyo3::append_to_inittab!(hyperlab_py);
        Python::initialize();
    });
    Python::attach(|py| {
        let globals = PyDict::new(py);
        let src = CString::new(format!("import hyperlab_py as h\n{code}")).unwrap();
        if let Err(e) = py.run(&src, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

use hyperlab_py::hyperlab_py;

#[test]
fn unimodular_pair_roundtrip() {
    run(r#"
m = h.UniModularMat(2, 1, 1, 1)
z1, z2 = m.to_gauss_pair()
assert (z1.re, z1.im, z2.re, z2.im) == (3, 0, 1, -2)
assert h.UniModularMat.from_gauss_pair(z1, z2) == m
assert m.nu_h() == 7
assert all(g.nu_h() == 7 for g in h.enumerate_norm(7))
"#);
}

#[test]
fn counts_and_reports() {
    run(r#"
r = h.count_range(3)
assert r.count == 20, r.count
assert abs(h.s_e_direct(1, 1, 50)[0] - h.s_e_factored(1, 1, 50)[0]) < 1e-9
assert h.s_h(1, 0, 9) == (0.0, 0.0)
import json
assert json.loads(h.psi_h(7).to_json())["count"] >= 1
"#);
}

#[test]
fn quaternion_elements() {
    run(r#"
q = h.QuatMat(6, 0, 3, 1)
assert (q @ q.inverse()).coords() == (1, 0, 0, 0)
d = q.decompose()
m = d.recompose()
e = q.embed()
scale = max(abs(v) for row in e for v in row)
assert max(abs(m[i][j] - e[i][j]) for i in range(2) for j in range(2)) < 1e-12 * scale, (m, e, d)
assert len(h.enumerate_cosets(1)) == 0
assert all(c.nu() == 7 for c in h.enumerate_cosets(7)) and h.enumerate_cosets(7)
"#);
}

#[test]
fn errors_map_to_python_exceptions() {
    run(r#"
for f, exc in [(lambda: h.UniModularMat(1, 1, 1, 1), ValueError),
               (lambda: h.enumerate_norm(1), ValueError),
               (lambda: h.titchmarsh_sum(100, 3), ValueError)]:
    try:
        f()
    except exc:
        pass
    else:
        raise AssertionError("expected " + exc.__name__)
assert issubclass(h.CapExceeded, Exception)
"#);
}
