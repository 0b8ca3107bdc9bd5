from django.test import SimpleTestCase
import numpy as np

from qesk.graph import ContractViolation, DatasetBundle, Graph, adjacency
from .base import PATH3, SINGLE_EDGE, TRIANGLE, random_graph, random_permutation, seeded


class GraphTests(SimpleTestCase):
    def test_edges_collapse(self):
        g = Graph(3, [(0, 1), (1, 0), (0, 1), (2, 1)])
        self.assertEqual(g.edge_count, 2)
        self.assertEqual(g.sorted_edges(), [(0, 1), (1, 2)])
        self.assertEqual(g.neighbors(1), (0, 2))
        self.assertEqual(g.degree(0), 1)

    def test_self_loop(self):
        self.assertRaises(ContractViolation, lambda: Graph(2, [(1, 1)]))

    def test_out_of_range(self):
        self.assertRaises(ContractViolation, lambda: Graph(2, [(0, 2)]))
        self.assertRaises(ContractViolation, lambda: Graph(2, [(-1, 0)]))
        self.assertRaises(ContractViolation, lambda: Graph(-1))

    def test_attribute_length(self):
        self.assertRaises(ContractViolation, lambda: Graph(2, [(0, 1)], [1]))
        self.assertEqual(Graph(2, [(0, 1)], ['3', 4]).initial_attributes, (3, 4))

    def test_equality(self):
        self.assertEqual(Graph(3, [(0, 1), (1, 2)]), PATH3)
        self.assertNotEqual(Graph(3, [(0, 1), (1, 2)], [0, 0, 0]), PATH3)
        self.assertEqual(len({PATH3, Graph(3, [(2, 1), (1, 0)])}), 1)

    def test_permuted(self):
        g = Graph(3, [(0, 1)], [7, 8, 9])
        p = g.permuted([2, 0, 1])
        self.assertEqual(p.sorted_edges(), [(0, 2)])
        self.assertEqual(p.initial_attributes, (8, 9, 7))
        self.assertRaises(ContractViolation, lambda: g.permuted([0, 0, 1]))

    def test_adjacency(self):
        np.testing.assert_array_equal(adjacency(SINGLE_EDGE), [[0, 1], [1, 0]])
        np.testing.assert_array_equal(adjacency(TRIANGLE), np.ones((3, 3)) - np.eye(3))
        np.testing.assert_array_equal(adjacency(Graph(3)), np.zeros((3, 3)))
        self.assertEqual(adjacency(Graph(0)).shape, (0, 0))

    def test_adjacency_permutation(self):
        rng = seeded(1)
        for _ in range(20):
            g = random_graph(rng, int(rng.integers(1, 12)))
            perm = random_permutation(rng, g.vertex_count)
            a, ap = adjacency(g), adjacency(g.permuted(perm))
            np.testing.assert_array_equal(ap[np.ix_(perm, perm)], a)
            np.testing.assert_array_equal(a, a.T)


class DatasetBundleTests(SimpleTestCase):
    def test_bundle(self):
        bundle = DatasetBundle('X', [PATH3, TRIANGLE, SINGLE_EDGE], [2, 1, 2])
        self.assertEqual(len(bundle), 3)
        self.assertIs(bundle[1], TRIANGLE)
        self.assertEqual(bundle.classes, [1, 2])
        self.assertEqual(bundle.class_counts(), {2: 2, 1: 1})
        self.assertEqual(list(bundle), [PATH3, TRIANGLE, SINGLE_EDGE])

    def test_label_count_mismatch(self):
        self.assertRaises(ContractViolation, lambda: DatasetBundle('X', [PATH3], [1, 2]))

    def test_attribute_claim(self):
        self.assertRaises(ContractViolation, lambda: DatasetBundle('X', [PATH3], [1], True))
