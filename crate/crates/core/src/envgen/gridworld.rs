use crate::mdp::{FiniteMdp, MdpParts};

pub const GRID_SIZE: usize = 5;
pub const GRID_GAMMA: f64 = 0.95;
pub const GRID_START: usize = 0;
pub const GRID_GOAL: usize = GRID_SIZE * GRID_SIZE - 1;

/// Probability of moving in the requested, opposite, and each sideways direction.
const P_INTENDED: f64 = 0.75;
const P_OPPOSITE: f64 = 0.05;
const P_SIDE: f64 = 0.10;

/// Gridworld moves. State `row * 5 + col`, row 0 at the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Up = 0,
    Down = 1,
    Left = 2,
    Right = 3,
}

impl Move {
    pub const ALL: [Move; 4] = [Move::Up, Move::Down, Move::Left, Move::Right];

    fn opposite(self) -> Move {
        match self {
            Move::Up => Move::Down,
            Move::Down => Move::Up,
            Move::Left => Move::Right,
            Move::Right => Move::Left,
        }
    }

    fn sides(self) -> [Move; 2] {
        match self {
            Move::Up | Move::Down => [Move::Left, Move::Right],
            Move::Left | Move::Right => [Move::Up, Move::Down],
        }
    }
}

/// Vertical wall segments: `(col, row)` blocks moves between `col - 1`
/// and `col` on that row.
const WALLS: [(usize, usize); 5] = [(3, 0), (3, 1), (3, 2), (4, 2), (4, 3)];

fn wall_between(row: usize, left_col: usize) -> bool {
    WALLS.contains(&(left_col + 1, row))
}

/// Cell reached by an attempted move; blocked moves stay put.
pub fn grid_move(state: usize, dir: Move) -> usize {
    let (row, col) = (state / GRID_SIZE, state % GRID_SIZE);
    let (r, c) = match dir {
        Move::Up if row + 1 < GRID_SIZE => (row + 1, col),
        Move::Down if row > 0 => (row - 1, col),
        Move::Left if col > 0 && !wall_between(row, col - 1) => (row, col - 1),
        Move::Right if col + 1 < GRID_SIZE && !wall_between(row, col) => (row, col + 1),
        _ => (row, col),
    };
    r * GRID_SIZE + c
}

/// The 5x5 stochastic gridworld with its two interior walls.
///
/// The realised direction is drawn first (75% intended, 5% opposite, 10%
/// each side) and then checked against walls and the border. Entering the
/// top-right goal pays 1 and ends the episode.
pub fn make_gridworld() -> FiniteMdp {
    let ns = GRID_SIZE * GRID_SIZE;
    let na = Move::ALL.len();
    let mut transition = vec![0.0; ns * na * ns];
    let mut outcome = vec![0.0; ns * na * ns];
    let mut reward = vec![0.0; ns * na];
    for x in (0..ns).filter(|&x| x != GRID_GOAL) {
        for dir in Move::ALL {
            let sa = x * na + dir as usize;
            let [s1, s2] = dir.sides();
            for (d, p) in [
                (dir, P_INTENDED),
                (dir.opposite(), P_OPPOSITE),
                (s1, P_SIDE),
                (s2, P_SIDE),
            ] {
                transition[sa * ns + grid_move(x, d)] += p;
            }
            outcome[sa * ns + GRID_GOAL] = 1.0;
            reward[sa] = transition[sa * ns + GRID_GOAL];
        }
    }
    let mut terminal = vec![false; ns];
    terminal[GRID_GOAL] = true;
    FiniteMdp::from_parts(MdpParts {
        n_states: ns,
        n_actions: na,
        transition,
        reward,
        outcome_reward: Some(outcome),
        gamma: GRID_GAMMA,
        initial_state: GRID_START,
        terminal,
        r_max: 1.0,
    })
    .expect("gridworld tables are valid")
}
