use alloc::vec;
use alloc::vec::Vec;

use super::SensorNode;

/// Which heads a node can hear when choosing a cluster.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReachPolicy {
    Unlimited,
    /// Only heads within this many meters.
    Within(f64),
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ClusterAssignment {
    /// Head ids, ascending.
    pub heads: Vec<usize>,
    /// Indexed by node id: the head a node reports to (a head maps to
    /// itself), or `None` for dead and direct-to-base-station nodes.
    pub member_of: Vec<Option<usize>>,
    /// Alive nodes that heard no head, ascending.
    pub direct_to_bs: Vec<usize>,
}

impl ClusterAssignment {
    /// Non-head nodes attached to `head`, ascending.
    pub fn members(&self, head: usize) -> impl Iterator<Item = usize> + '_ {
        self.member_of
            .iter()
            .enumerate()
            .filter(move |&(id, h)| *h == Some(head) && id != head)
            .map(|(id, _)| id)
    }

    pub fn is_head(&self, id: usize) -> bool {
        self.member_of[id] == Some(id)
    }
}

/// Every alive non-head joins its nearest reachable head (ties to the lower
/// id); nodes with no reachable head transmit straight to the base station.
/// `heads` may be unsorted; dead heads are ignored.
pub fn form_clusters(
    nodes: &[SensorNode],
    heads: &[usize],
    reach: ReachPolicy,
) -> ClusterAssignment {
    let mut heads: Vec<usize> = heads.iter().copied().filter(|&h| nodes[h].alive).collect();
    heads.sort_unstable();
    heads.dedup();

    let mut member_of = vec![None; nodes.len()];
    for &h in &heads {
        member_of[h] = Some(h);
    }
    let mut direct_to_bs = Vec::new();
    for node in nodes.iter().filter(|n| n.alive) {
        if member_of[node.id].is_some() {
            continue;
        }
        let mut best: Option<(f64, usize)> = None;
        for &h in &heads {
            let d2 = node.position.distance_squared(nodes[h].position);
            if let ReachPolicy::Within(r) = reach {
                if d2 > r * r {
                    continue;
                }
            }
            if best.is_none_or(|(bd2, _)| d2 < bd2) {
                best = Some((d2, h));
            }
        }
        match best {
            Some((_, h)) => member_of[node.id] = Some(h),
            None => direct_to_bs.push(node.id),
        }
    }
    ClusterAssignment {
        heads,
        member_of,
        direct_to_bs,
    }
}
