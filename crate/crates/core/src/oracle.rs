//! Ground truth for small instances: exhaustive tour enumeration and a
//! checker for the arc-based integer formulation with Miller-Tucker-Zemlin
//! ordering constraints.

use itertools::Itertools;
use thiserror::Error;

use crate::model::{Instance, ModelError, MultiLayerMatrix, Route, Schedule, Seconds};

/// Largest client count [`brute_force_optimum`] accepts by default.
pub const DEFAULT_CLIENT_CAP: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{clients} clients exceed the brute-force cap of {cap}")]
    TooLarge { clients: usize, cap: usize },
    #[error("route is not a complete tour: {0}")]
    IncompleteRoute(String),
    #[error("arc solution is infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Cheapest tour by exhaustive enumeration, using [`DEFAULT_CLIENT_CAP`].
pub fn brute_force_optimum(matrix: &MultiLayerMatrix) -> Result<(Route, Schedule), OracleError> {
    brute_force_optimum_with_cap(matrix, DEFAULT_CLIENT_CAP)
}

/// Ties go to the lexicographically smallest visit order.
pub fn brute_force_optimum_with_cap(
    matrix: &MultiLayerMatrix,
    cap: usize,
) -> Result<(Route, Schedule), OracleError> {
    let clients = matrix.n_nodes().saturating_sub(1);
    if clients > cap {
        return Err(OracleError::TooLarge { clients, cap });
    }
    let mut best: Option<(Seconds, Vec<usize>)> = None;
    // itertools yields permutations of a sorted input in lexicographic order
    for perm in (1..matrix.n_nodes()).permutations(clients) {
        let cost = matrix.tour_cost(perm.iter().copied());
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, perm));
        }
    }
    let (_, order) = best.expect("at least the empty permutation");
    let route = Route::new(order);
    let schedule = matrix.evaluate_route(&route)?;
    Ok((route, schedule))
}

/// Binary arc variables `x` and ordering variables `u` for a tour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSolution {
    /// `x[i][j] == 1` iff the tour drives i -> j.
    pub x: Vec<Vec<u8>>,
    /// `u[i - 1]` is the ordering variable of client `i`.
    pub u: Vec<i64>,
}

impl ArcSolution {
    pub fn n_nodes(&self) -> usize {
        self.x.len()
    }

    pub fn u_of(&self, node: usize) -> i64 {
        self.u[node - 1]
    }
}

/// Arc form of a complete tour, with `u_i` set to the 1-based visit
/// position of client `i`.
pub fn route_to_arcs(route: &Route) -> Result<ArcSolution, OracleError> {
    let n = route.len() + 1;
    if !route.is_complete(n) {
        return Err(OracleError::IncompleteRoute(format!(
            "{:?} is not a permutation of 1..={}",
            route.order(),
            n - 1
        )));
    }
    let mut x = vec![vec![0u8; n]; n];
    let mut u = vec![0i64; n - 1];
    let mut prev = Instance::DEPOT;
    for (pos, &node) in route.order().iter().enumerate() {
        x[prev][node] = 1;
        u[node - 1] = pos as i64 + 1;
        prev = node;
    }
    x[prev][Instance::DEPOT] = 1;
    Ok(ArcSolution { x, u })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonBinary { i: usize, j: usize, value: u8 },
    SelfLoop { i: usize },
    /// Outflow of node `i` is not 1.
    Departures { i: usize, sum: usize },
    /// Inflow of node `j` is not 1.
    Arrivals { j: usize, sum: usize },
    /// `u_i - u_j + n x_ij > n - 1`.
    Ordering { i: usize, j: usize, lhs: i64 },
}

/// Checks flow conservation and the MTZ ordering constraints over clients
/// `1..n`. An empty result means feasible.
pub fn check_milp_feasibility(sol: &ArcSolution, n: usize) -> Vec<Violation> {
    let mut violations = Vec::new();
    debug_assert_eq!(sol.x.len(), n);
    for i in 0..n {
        if sol.x[i][i] != 0 {
            violations.push(Violation::SelfLoop { i });
        }
        for j in 0..n {
            if sol.x[i][j] > 1 {
                violations.push(Violation::NonBinary { i, j, value: sol.x[i][j] });
            }
        }
    }
    for i in 0..n {
        let sum: usize = sol.x[i].iter().map(|&v| v as usize).sum();
        if sum != 1 {
            violations.push(Violation::Departures { i, sum });
        }
    }
    for j in 0..n {
        let sum: usize = (0..n).map(|i| sol.x[i][j] as usize).sum();
        if sum != 1 {
            violations.push(Violation::Arrivals { j, sum });
        }
    }
    let big_n = n as i64;
    for i in 1..n {
        for j in 1..n {
            if i == j {
                continue;
            }
            let lhs = sol.u_of(i) - sol.u_of(j) + big_n * sol.x[i][j] as i64;
            if lhs > big_n - 1 {
                violations.push(Violation::Ordering { i, j, lhs });
            }
        }
    }
    violations
}

/// Follows successors from the depot. Returns the client order if the arcs
/// form one tour through every node.
pub fn tour_from_arcs(x: &[Vec<u8>]) -> Result<Route, OracleError> {
    let n = x.len();
    let mut order = Vec::with_capacity(n.saturating_sub(1));
    let mut at = Instance::DEPOT;
    for _ in 0..n {
        let next = x[at]
            .iter()
            .position(|&v| v == 1)
            .ok_or_else(|| OracleError::Infeasible(format!("node {at} has no outgoing arc")))?;
        if next == Instance::DEPOT {
            break;
        }
        order.push(next);
        at = next;
    }
    if order.len() + 1 != n {
        return Err(OracleError::Infeasible(format!(
            "subtour: the depot's cycle visits {} of {} nodes",
            order.len() + 1,
            n
        )));
    }
    Ok(Route::new(order))
}

/// Objective value of a feasible arc solution under the time-dependent matrix.
pub fn objective_of(sol: &ArcSolution, matrix: &MultiLayerMatrix) -> Result<Seconds, OracleError> {
    let n = sol.n_nodes();
    if n != matrix.n_nodes() {
        return Err(ModelError::InvalidInput(format!(
            "arc solution has {n} nodes but the matrix has {}",
            matrix.n_nodes()
        ))
        .into());
    }
    let flow: Vec<_> = check_milp_feasibility(sol, n)
        .into_iter()
        .filter(|v| !matches!(v, Violation::Ordering { .. }))
        .collect();
    if let Some(first) = flow.first() {
        return Err(OracleError::Infeasible(format!(
            "{} flow violations, first {first:?}",
            flow.len()
        )));
    }
    let route = tour_from_arcs(&sol.x)?;
    Ok(matrix.evaluate_route(&route)?.total_cost)
}

/// Searches `u` over `[1, n]^(n-1)` for values satisfying every ordering
/// constraint of `x`. Exponential; meant for `n <= 6`.
pub fn find_mtz_potential(x: &[Vec<u8>]) -> Option<Vec<i64>> {
    let n = x.len();
    if n < 2 {
        return Some(Vec::new());
    }
    let big_n = n as i64;
    let clients = n - 1;
    let mut u = vec![1i64; clients];
    loop {
        let ok = (1..n).all(|i| {
            (1..n).all(|j| i == j || u[i - 1] - u[j - 1] + big_n * (x[i][j] as i64) < big_n)
        });
        if ok {
            return Some(u);
        }
        // odometer increment
        let mut d = 0;
        loop {
            if d == clients {
                return None;
            }
            if u[d] < big_n {
                u[d] += 1;
                break;
            }
            u[d] = 1;
            d += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_client() {
        let m = MultiLayerMatrix::constant(2, 2, 60, 9).unwrap();
        let (r, s) = brute_force_optimum(&m).unwrap();
        assert_eq!(r, Route::new(vec![1]));
        assert_eq!(s.total_cost, 18);
    }

    #[test]
    fn three_clients_asymmetric() {
        // Hand enumeration over six tours (arc costs below, single layer):
        //   [1,2,3] 1+1+1+20 = 23    [1,3,2] 1+30+40+5 = 76
        //   [2,1,3] 10+40+30+20 = 100  [2,3,1] 10+1+40+7 = 58
        //   [3,1,2] 3+40+1+5 = 49    [3,2,1] 3+40+40+7 = 90
        let layer = vec![
            vec![0, 1, 10, 3],
            vec![7, 0, 1, 30],
            vec![5, 40, 0, 1],
            vec![20, 40, 40, 0],
        ];
        let m = MultiLayerMatrix::new(60, vec![layer]).unwrap();
        let (r, s) = brute_force_optimum(&m).unwrap();
        assert_eq!(r, Route::new(vec![1, 2, 3]));
        assert_eq!(s.total_cost, 23);
    }

    #[test]
    fn ties_go_to_lexicographic_first() {
        let m = MultiLayerMatrix::constant(5, 3, 60, 10).unwrap();
        let (r, s) = brute_force_optimum(&m).unwrap();
        assert_eq!(r, Route::new(vec![1, 2, 3, 4]));
        assert_eq!(s.total_cost, 50);
    }

    #[test]
    fn cap_is_enforced() {
        let m = MultiLayerMatrix::constant(12, 1, 60, 1).unwrap();
        assert_eq!(
            brute_force_optimum(&m).unwrap_err(),
            OracleError::TooLarge { clients: 11, cap: 10 }
        );
    }

    #[test]
    fn arcs_of_a_small_route() {
        let sol = route_to_arcs(&Route::new(vec![1, 2])).unwrap();
        let mut expected = vec![vec![0u8; 3]; 3];
        expected[0][1] = 1;
        expected[1][2] = 1;
        expected[2][0] = 1;
        assert_eq!(sol.x, expected);
        assert!(check_milp_feasibility(&sol, 3).is_empty());
    }

    #[test]
    fn positions_become_ordering_variables() {
        let sol = route_to_arcs(&Route::new(vec![2, 1, 3])).unwrap();
        assert_eq!((sol.u_of(2), sol.u_of(1), sol.u_of(3)), (1, 2, 3));
        for i in 0..4 {
            assert_eq!(sol.x[i].iter().map(|&v| v as u32).sum::<u32>(), 1);
            assert_eq!((0..4).map(|r| sol.x[r][i] as u32).sum::<u32>(), 1);
        }
    }

    #[test]
    fn incomplete_route_rejected() {
        assert!(matches!(
            route_to_arcs(&Route::new(vec![1, 3])),
            Err(OracleError::IncompleteRoute(_))
        ));
    }

    #[test]
    fn row_sum_two_is_reported() {
        let mut sol = route_to_arcs(&Route::new(vec![1, 2, 3])).unwrap();
        sol.x[0][2] = 1;
        let v = check_milp_feasibility(&sol, 4);
        assert!(v.contains(&Violation::Departures { i: 0, sum: 2 }));
        assert!(v.contains(&Violation::Arrivals { j: 2, sum: 2 }));
    }

    fn split_subtours() -> Vec<Vec<u8>> {
        // depot -> 1 -> 2 -> depot and 3 -> 4 -> 3
        let mut x = vec![vec![0u8; 5]; 5];
        x[0][1] = 1;
        x[1][2] = 1;
        x[2][0] = 1;
        x[3][4] = 1;
        x[4][3] = 1;
        x
    }

    #[test]
    fn disjoint_subtours_admit_no_ordering() {
        let x = split_subtours();
        assert_eq!(find_mtz_potential(&x), None);
        // any concrete u must break at least one ordering row
        for u3 in 1..=5 {
            for u4 in 1..=5 {
                let sol = ArcSolution { x: x.clone(), u: vec![1, 2, u3, u4] };
                assert!(check_milp_feasibility(&sol, 5)
                    .iter()
                    .any(|v| matches!(v, Violation::Ordering { .. })));
            }
        }
    }

    #[test]
    fn objective_matches_evaluation() {
        let m = MultiLayerMatrix::constant(2, 1, 60, 25).unwrap();
        let sol = route_to_arcs(&Route::new(vec![1])).unwrap();
        assert_eq!(objective_of(&sol, &m).unwrap(), 50);
        let sub = ArcSolution { x: split_subtours(), u: vec![1, 2, 3, 4] };
        let m5 = MultiLayerMatrix::constant(5, 1, 60, 1).unwrap();
        assert!(matches!(objective_of(&sub, &m5), Err(OracleError::Infeasible(_))));
    }
}
