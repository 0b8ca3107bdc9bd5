import json

from django.test import SimpleTestCase
import numpy as np

from qesk.conf import ConfigurationException
from qesk.evaluation import _splits, cross_validate, report_to_text, select_c, write_report
from qesk.kernel import GramMatrix
from .base import DatasetTestBase


def block_gram(labels):
    labels = np.asarray(labels)
    return (labels[:, None] == labels[None, :]).astype(float)


class CrossValidationTests(SimpleTestCase):
    def test_ideal_kernel(self):
        labels = [1] * 10 + [2] * 10
        report = cross_validate(block_gram(labels), labels, folds=5, repetitions=2, c_grid=[0.01, 1.0, 100.0])
        self.assertEqual(report['mean'], 1.0)
        self.assertEqual(report['std_error'], 0.0)
        self.assertEqual(np.array(report['per_fold_accuracies']).shape, (2, 5))
        # all C values tie, the smallest one wins
        self.assertEqual(report['chosen_c'], [[0.01] * 5] * 2)
        self.assertEqual(report['chosen_c_histogram'], {'0.01': 10})

    def test_two_folds(self):
        labels = [1] * 10 + [2] * 10
        report = cross_validate(block_gram(labels), labels, folds=2, repetitions=2, c_grid=[1.0])
        self.assertEqual(report['mean'], 1.0)
        self.assertEqual(np.array(report['per_fold_accuracies']).shape, (2, 2))

    def test_identity_kernel_is_chance(self):
        labels = [0] * 30 + [1] * 30
        for seed in range(5):
            report = cross_validate(np.eye(60), labels, folds=10, repetitions=1, c_grid=[1.0], seed=seed)
            self.assertAlmostEqual(report['mean'], 0.5, delta=0.1)

    def test_summary_statistics(self):
        labels = [0] * 12 + [1] * 12
        rng = np.random.default_rng(3)
        points = rng.normal(size=(24, 2)) + np.array(labels)[:, None]
        k = points @ points.T
        report = cross_validate(k, labels, folds=4, repetitions=3, c_grid=[0.1, 1.0], seed=9)
        means = np.array(report['per_fold_accuracies']).mean(axis=1)
        np.testing.assert_allclose(report['repetition_means'], means)
        self.assertAlmostEqual(report['mean'], float(means.mean()))
        self.assertAlmostEqual(report['std_error'], float(np.std(means) / np.sqrt(3)))
        self.assertEqual(sum(report['chosen_c_histogram'].values()), 12)

    def test_deterministic(self):
        labels = [0] * 9 + [1] * 8 + [2] * 7
        rng = np.random.default_rng(4)
        points = rng.normal(size=(24, 3)) + np.eye(3)[labels] * 2
        k = GramMatrix(points @ points.T, 'wlsk', 3)
        first = cross_validate(k, labels, folds=3, repetitions=2, c_grid=[0.1, 1.0], seed=5)
        second = cross_validate(k, labels, folds=3, repetitions=2, c_grid=[0.1, 1.0], seed=5, workers=4)
        self.assertEqual(report_to_text(first), report_to_text(second))
        self.assertEqual(first['kernel_kind'], 'wlsk')
        self.assertEqual(first['i_max'], 3)

    def test_errors(self):
        labels = [0, 1] * 5
        self.assertRaises(ConfigurationException, lambda: cross_validate(np.eye(10), labels, folds=11))
        self.assertRaises(ConfigurationException, lambda: cross_validate(np.eye(10), [0] * 10, folds=2))
        self.assertRaises(ConfigurationException, lambda: cross_validate(np.eye(9), labels, folds=2))


class SplitTests(SimpleTestCase):
    def test_stratified(self):
        labels = np.array([0] * 37 + [1] * 23 + [2] * 10)
        splits = _splits(labels, 10, 17)
        self.assertEqual(len(splits), 10)
        seen = np.concatenate([test for _, test in splits])
        self.assertEqual(sorted(seen.tolist()), list(range(70)))
        for train, test in splits:
            self.assertEqual(len(set(train) & set(test)), 0)
            for cls, total in ((0, 37), (1, 23), (2, 10)):
                self.assertLessEqual(abs(np.sum(labels[test] == cls) - total / 10), 1)

    def test_reshuffled(self):
        labels = np.array([0, 1] * 20)
        first = [test.tolist() for _, test in _splits(labels, 4, 1)]
        second = [test.tolist() for _, test in _splits(labels, 4, 2)]
        self.assertNotEqual(first, second)

    def test_select_c_ties(self):
        labels = np.array([0] * 8 + [1] * 8)
        c = select_c(block_gram(labels), labels, np.arange(16), [10.0, 0.1, 1.0], 4, 0)
        self.assertEqual(c, 0.1)

    def test_select_c_single_class_training(self):
        labels = np.array([0] * 6 + [1] * 6)
        with self.assertLogs('qesk.evaluation', 'WARNING') as logs:
            with self.assertRaises(ConfigurationException) as cm:
                select_c(block_gram(labels), labels, np.arange(6), [1.0], 3, 0)
        self.assertIn('single training class', str(cm.exception))
        self.assertEqual(len(logs.output), 3)


class ReportFileTests(DatasetTestBase):
    def test_write_report(self):
        labels = [1] * 10 + [2] * 10
        report = cross_validate(block_gram(labels), labels, folds=5, repetitions=1, c_grid=[1.0],
                                dataset='BLOCK')
        path = self.path('report.json')
        write_report(report, path)
        with open(path) as f:
            text = f.read()
        self.assertEqual(text, report_to_text(report))
        self.assertEqual(json.loads(text)['dataset'], 'BLOCK')
        self.assertEqual(list(json.loads(text)), sorted(json.loads(text)))
