use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::centroid::compute_centroid;
use super::points::ParticularPoints;
use crate::morphology::Skeleton;
use crate::raster::Pixel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    Endpoint,
    Intersection,
}

/// A graph vertex: an endpoint, or a merged cluster of intersection pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    /// Representative pixel; the node's key in the graph.
    pub id: Pixel,
    pub kind: NodeKind,
    pub members: Vec<Pixel>,
    /// Index into [`VesselGraph::centroids`].
    pub component: usize,
}

/// One skeleton segment seen from one of its ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub to: Pixel,
    /// Pixels from a member of the source node to a member of `to`,
    /// both included.
    pub path: Vec<Pixel>,
}

/// A skeleton segment between two nodes, stored once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub from: Pixel,
    pub to: Pixel,
    pub path: Vec<Pixel>,
}

impl Segment {
    pub fn is_self_loop(&self) -> bool {
        self.from == self.to
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VesselGraph {
    pub nodes: BTreeMap<Pixel, Node>,
    /// Every node maps to the segments leaving it. Each segment appears once
    /// in each direction.
    pub adjacency: BTreeMap<Pixel, Vec<Link>>,
    /// Discovery order.
    pub segments: Vec<Segment>,
    /// One centroid per 8-connected skeleton component, in the order of each
    /// component's first raster pixel.
    pub centroids: Vec<Pixel>,
}

impl VesselGraph {
    pub fn degree(&self, node: Pixel) -> usize {
        self.adjacency.get(&node).map_or(0, Vec::len)
    }

    pub fn centroid_of(&self, node: Pixel) -> Option<Pixel> {
        self.nodes
            .get(&node)
            .and_then(|n| self.centroids.get(n.component).copied())
    }
}

const NO_NODE: u32 = u32::MAX;

/// Links every particular point to the particular points reachable along the
/// skeleton without crossing a third one.
///
/// Non-particular pixels are visited at most once, so every segment is walked
/// a single time; its reverse is recorded for the far node. Non-particular
/// skeleton pixels have exactly two skeleton neighbors, which makes each walk
/// a simple chain follow.
pub fn build_connectivity(skeleton: &Skeleton, points: &ParticularPoints) -> VesselGraph {
    let raster = skeleton.raster();
    let (labels, _) = raster.label_components();
    let centroids = compute_centroid(skeleton);

    let mut nodes: Vec<Node> = points
        .endpoints
        .iter()
        .map(|&p| Node {
            id: p,
            kind: NodeKind::Endpoint,
            members: vec![p],
            component: 0,
        })
        .chain(points.junctions().into_iter().map(|j| Node {
            id: j.representative,
            kind: NodeKind::Intersection,
            members: j.members,
            component: 0,
        }))
        .collect();
    nodes.sort_unstable_by_key(|n| n.id);

    let mut node_at = vec![NO_NODE; raster.bits().len()];
    for (i, node) in nodes.iter_mut().enumerate() {
        node.component = labels[raster.index(node.id)] as usize - 1;
        for &m in &node.members {
            node_at[raster.index(m)] = i as u32;
        }
    }

    let mut visited = vec![false; raster.bits().len()];
    let mut direct: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut segments: Vec<(u32, u32, Vec<Pixel>)> = Vec::new();

    for (ni, node) in nodes.iter().enumerate() {
        let ni = ni as u32;
        for &m in &node.members {
            for q in raster.set_neighbors(m) {
                let qn = node_at[raster.index(q)];
                if qn == ni {
                    continue;
                }
                if qn != NO_NODE {
                    if direct.insert((ni.min(qn), ni.max(qn))) {
                        segments.push((ni, qn, vec![m, q]));
                    }
                    continue;
                }
                if visited[raster.index(q)] {
                    continue;
                }
                visited[raster.index(q)] = true;
                let mut path = vec![m, q];
                let (mut prev, mut cur) = (m, q);
                let end = loop {
                    let Some(next) = raster.set_neighbors(cur).find(|&n| n != prev) else {
                        break None;
                    };
                    path.push(next);
                    let nn = node_at[raster.index(next)];
                    if nn != NO_NODE {
                        break Some(nn);
                    }
                    if visited[raster.index(next)] {
                        break None;
                    }
                    visited[raster.index(next)] = true;
                    (prev, cur) = (cur, next);
                };
                if let Some(nn) = end {
                    segments.push((ni, nn, path));
                }
            }
        }
    }

    let mut adjacency: BTreeMap<Pixel, Vec<Link>> =
        nodes.iter().map(|n| (n.id, Vec::new())).collect();
    let segments: Vec<Segment> = segments
        .into_iter()
        .map(|(a, b, path)| Segment {
            from: nodes[a as usize].id,
            to: nodes[b as usize].id,
            path,
        })
        .collect();
    for seg in &segments {
        adjacency.get_mut(&seg.from).unwrap().push(Link {
            to: seg.to,
            path: seg.path.clone(),
        });
        let mut rev = seg.path.clone();
        rev.reverse();
        adjacency.get_mut(&seg.to).unwrap().push(Link {
            to: seg.from,
            path: rev,
        });
    }

    VesselGraph {
        nodes: nodes.into_iter().map(|n| (n.id, n)).collect(),
        adjacency,
        segments,
        centroids,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::points::detect_particular_points;
    use crate::raster::BitRaster;

    fn graph(w: usize, h: usize, pixels: impl IntoIterator<Item = Pixel>) -> VesselGraph {
        let s = Skeleton::from_raster(BitRaster::from_pixels(w, h, pixels));
        let pts = detect_particular_points(&s);
        build_connectivity(&s, &pts)
    }

    fn targets(g: &VesselGraph, p: Pixel) -> Vec<Pixel> {
        g.adjacency[&p].iter().map(|l| l.to).collect()
    }

    #[test]
    fn single_segment() {
        let g = graph(20, 3, (2..17).map(|c| Pixel::new(1, c)));
        let (a, b) = (Pixel::new(1, 2), Pixel::new(1, 16));
        assert_eq!(targets(&g, a), vec![b]);
        assert_eq!(targets(&g, b), vec![a]);
        assert_eq!(g.segments.len(), 1);
        assert_eq!(g.segments[0].path.len(), 15);
        assert_eq!(g.adjacency[&b][0].path.first(), Some(&b));
    }

    #[test]
    fn plus_sign_star() {
        let mut px = Vec::new();
        for i in 0..11 {
            px.push(Pixel::new(i + 1, 6));
            px.push(Pixel::new(6, i + 1));
        }
        let g = graph(13, 13, px);
        // The centre and its axis neighbours form one junction.
        let c = Pixel::new(5, 6);
        assert_eq!(g.nodes[&c].members.len(), 5);
        let mut t = targets(&g, c);
        t.sort();
        assert_eq!(
            t,
            vec![Pixel::new(1, 6), Pixel::new(6, 1), Pixel::new(6, 11), Pixel::new(11, 6)]
        );
        for tip in t {
            assert_eq!(targets(&g, tip), vec![c]);
        }
        assert_eq!(g.centroids, vec![Pixel::new(6, 6)]);
    }

    #[test]
    fn disjoint_segments_stay_separate() {
        let mut px: Vec<Pixel> = (1..9).map(|c| Pixel::new(2, c)).collect();
        px.extend((1..9).map(|c| Pixel::new(8, c)));
        let g = graph(12, 12, px);
        assert_eq!(g.segments.len(), 2);
        assert_eq!(g.centroids.len(), 2);
        for seg in &g.segments {
            assert_eq!(seg.from.row, seg.to.row);
            assert_ne!(g.nodes[&seg.from].component, usize::MAX);
            assert_eq!(g.nodes[&seg.from].component, g.nodes[&seg.to].component);
        }
    }

    #[test]
    fn adjacent_particular_points_link_directly() {
        // A diagonal cross with one arm cut to a single pixel.
        let mut px = vec![Pixel::new(5, 5), Pixel::new(4, 6)];
        for k in 1..5 {
            px.push(Pixel::new(5 - k, 5 - k));
            px.push(Pixel::new(5 + k, 5 + k));
            px.push(Pixel::new(5 + k, 5 - k));
        }
        let g = graph(12, 12, px);
        let spur = Pixel::new(4, 6);
        assert_eq!(g.nodes[&spur].kind, NodeKind::Endpoint);
        assert_eq!(g.adjacency[&spur].len(), 1);
        assert_eq!(g.adjacency[&spur][0].path.len(), 2);
        let j = g.adjacency[&spur][0].to;
        assert!(targets(&g, j).contains(&spur));
    }

    #[test]
    fn loop_back_to_same_junction() {
        // A lollipop: square ring hanging off a stem.
        let mut px: Vec<Pixel> = (10..20).map(|r| Pixel::new(r, 6)).collect();
        // Corners are cut so the ring stays one pixel thin.
        for c in 4..9 {
            px.push(Pixel::new(3, c));
            px.push(Pixel::new(9, c));
        }
        for r in 4..9 {
            px.push(Pixel::new(r, 3));
            px.push(Pixel::new(r, 9));
        }
        let g = graph(14, 22, px);
        let self_loops: Vec<_> = g.segments.iter().filter(|s| s.is_self_loop()).collect();
        assert_eq!(self_loops.len(), 1);
        let j = self_loops[0].from;
        assert_eq!(g.degree(j), 3);
    }

    #[test]
    fn paths_lie_on_skeleton_and_are_chains() {
        let mut px: Vec<Pixel> = (1..30).map(|r| Pixel::new(r, 15)).collect();
        px.extend((1..12).map(|k| Pixel::new(15 - k, 15 - k)));
        px.extend((1..12).map(|k| Pixel::new(15 + k, 15 + k)));
        let g = graph(32, 32, px.clone());
        for seg in &g.segments {
            for w in seg.path.windows(2) {
                assert!(w[0].is_neighbor_of(w[1]));
            }
            assert!(seg.path.iter().all(|p| px.contains(p)));
            assert!(g.nodes[&seg.from].members.contains(seg.path.first().unwrap()));
            assert!(g.nodes[&seg.to].members.contains(seg.path.last().unwrap()));
        }
    }
}
