//! The small worked systems used throughout the tests and the fixture suite.
//! Primed states are written with a trailing digit: `x′` is `x1`.

use crate::model::build::*;
use crate::model::{Kind, System};

/// `x →a x1`.
pub fn s_x() -> System {
    System::from_bundles("sx", Kind::Lts, [("x", set([("a", "x1")])), ("x1", set([]))])
}

/// `y →a y1`, `y →a y2`.
pub fn s_y() -> System {
    System::from_bundles("sy", Kind::Lts, [("y", set([("a", "y1"), ("a", "y2")])), ("y1", set([])), ("y2", set([]))])
}

/// `s_X^k`: `x` steps to `k·(a,x1)`.
pub fn s_x_ms(k: u64) -> System {
    System::from_bundles(format!("sx{k}"), Kind::Mts, [("x", ms([(k, "a", "x1")])), ("x1", ms([]))])
}

/// `s_Y^k`: `y` steps to `k·(a,y1) + k·(a,y2)`.
pub fn s_y_ms(k: u64) -> System {
    System::from_bundles(
        format!("sy{k}"),
        Kind::Mts,
        [("y", ms([(k, "a", "y1"), (k, "a", "y2")])), ("y1", ms([])), ("y2", ms([]))],
    )
}

/// `p_a(x) = 1·(1,a,x)`.
pub fn pa() -> System {
    System::from_bundles("pa", Kind::Pmts, [("x", m1([(1, r(1, 1), "a", "x")]))])
}

/// `p_b(y) = 2·(1/2,a,y)`.
pub fn pb() -> System {
    System::from_bundles("pb", Kind::Pmts, [("y", m1([(2, r(1, 2), "a", "y")]))])
}

/// `x` splits evenly over `x1, x2`, each half carried by `k` copies of `1/(2k)`.
pub fn s_xp_m1(k: u64) -> System {
    let p = r(1, 2 * k as i128);
    System::from_bundles(
        format!("sxp{k}"),
        Kind::Pmts,
        [("x", m1([(k, p, "a", "x1"), (k, p, "a", "x2")])), ("x1", m1([])), ("x2", m1([]))],
    )
}

/// `y` splits evenly over `y1, y2, y3`, each third carried by `k` copies of `1/(3k)`.
pub fn s_yp_m1(k: u64) -> System {
    let p = r(1, 3 * k as i128);
    System::from_bundles(
        format!("syp{k}"),
        Kind::Pmts,
        [("y", m1([(k, p, "a", "y1"), (k, p, "a", "y2"), (k, p, "a", "y3")])), ("y1", m1([])), ("y2", m1([])), ("y3", m1([]))],
    )
}

/// The distribution system `x ↦ (1/2,1/2)` over `x1, x2`.
pub fn s_xp() -> System {
    System::from_bundles(
        "sxp",
        Kind::Dts,
        [("x", dist([(r(1, 2), "a", "x1"), (r(1, 2), "a", "x2")])), ("x1", dist([])), ("x2", dist([]))],
    )
}

/// The distribution system `y ↦ (1/3,1/3,1/3)` over `y1, y2, y3`.
pub fn s_yp() -> System {
    System::from_bundles(
        "syp",
        Kind::Dts,
        [
            ("y", dist([(r(1, 3), "a", "y1"), (r(1, 3), "a", "y2"), (r(1, 3), "a", "y3")])),
            ("y1", dist([])),
            ("y2", dist([])),
            ("y3", dist([])),
        ],
    )
}

/// `{(x,y), (x1,y1), (x1,y2)}`, the relation between `s_X` and `s_Y` variants.
pub const R_XY: [(&str, &str); 3] = [("x", "y"), ("x1", "y1"), ("x1", "y2")];

/// `{(x,y)} ∪ {(x_i,y_j)}`, the relation between the probabilistic variants.
pub const R_XY_PROB: [(&str, &str); 7] =
    [("x", "y"), ("x1", "y1"), ("x1", "y2"), ("x1", "y3"), ("x2", "y1"), ("x2", "y2"), ("x2", "y3")];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_system;

    #[test]
    fn samples_are_valid() {
        for sys in [s_x(), s_y(), s_x_ms(2), s_y_ms(1), pa(), pb(), s_xp_m1(3), s_yp_m1(2), s_xp(), s_yp()] {
            assert!(validate_system(&sys).is_empty(), "{}", sys.name);
        }
    }
}
