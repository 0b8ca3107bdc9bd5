from io import StringIO
from unittest import mock
import json

from django.core.management import call_command
from django.core.management.base import CommandError
import numpy as np

from qesk.graph import Graph
from qesk.kernel import GramMatrix, read_gram, write_gram
from .base import PATH3, SINGLE_EDGE, DatasetTestBase, bundle_of, toy_dataset


def section(text, title):
    """Lines following the ``# <title>`` line up to the next section."""
    lines = text.splitlines()
    start = next(i for i, line in enumerate(lines) if line.startswith(f'# {title}'))
    rows = []
    for line in lines[start + 1:]:
        if line.startswith('#'):
            break
        rows.append(line)
    return rows


class KernelCommandTests(DatasetTestBase):
    def setUp(self):
        super().setUp()
        self.write_bundle(toy_dataset())

    def kernel(self, *args, **kwargs):
        call_command('qesk_kernel', '--dataset', 'TOY', '--dataset-dir', self.tmpdir, *args,
                     verbosity=0, **kwargs)

    def test_qesk_gram(self):
        out = self.path('toy.gram')
        self.kernel('--output', out)
        k = read_gram(out)
        self.assertEqual((k.kernel_kind, k.i_max, len(k)), ('qesk', 10, 24))
        np.testing.assert_array_equal(np.diag(k.values), 10.0)
        np.testing.assert_array_equal(k.values, k.values.T)
        with open(f'{out}.manifest.json') as f:
            manifest = json.load(f)
        self.assertEqual(manifest['tool'], 'django-qesk')
        self.assertEqual(len(manifest['codebook_sizes']), 10)
        self.assertTrue(manifest['psd']['passed'])
        self.assertEqual(manifest['label_policy'], 'given-attributes')
        self.assertEqual(manifest['dataset']['graphs'], 24)
        self.assertIn('gram', manifest['timings'])
        self.assertEqual(len(manifest['config_hash']), 64)

    def test_imax_one(self):
        out = self.path('toy1.gram')
        self.kernel('--imax', '1', '--output', out)
        k = read_gram(out).values
        self.assertTrue(np.all(k > 0) and np.all(k <= 1.0))

    def test_wlsk_normalized(self):
        out = self.path('toy_wlsk.gram')
        self.kernel('--kind', 'wlsk', '--normalize', '--output', out)
        k = read_gram(out)
        self.assertEqual(k.kernel_kind, 'wlsk-normalized')
        np.testing.assert_array_equal(np.diag(k.values), 1.0)

    def test_worker_count_irrelevant(self):
        outputs = []
        for workers in ('1', '4'):
            out = self.path(f'toy_{workers}.gram')
            self.kernel('--workers', workers, '--output', out)
            with open(out) as f:
                outputs.append(f.read())
        self.assertEqual(outputs[0], outputs[1])

    def test_default_output_name(self):
        with mock.patch('qesk.management.commands.qesk_kernel.write_gram') as writer, \
                mock.patch('qesk.pipeline.KernelPipeline.write_manifest'):
            self.kernel()
        self.assertEqual(writer.call_args[0][1], 'TOY_qesk.gram')

    def test_psd_failure_exit_code(self):
        out = self.path('fail.gram')
        with mock.patch('qesk.pipeline.psd_check', return_value=(-1.0, False)):
            with self.assertRaises(CommandError) as cm:
                self.kernel('--output', out)
        self.assertEqual(cm.exception.returncode, 3)
        # outputs are still written
        self.assertEqual(len(read_gram(out)), 24)

    def test_missing_dataset(self):
        with self.assertRaises(CommandError) as cm:
            call_command('qesk_kernel', '--dataset', 'NOPE', '--dataset-dir', self.tmpdir, verbosity=0)
        self.assertIn('stage parse failed', str(cm.exception))
        self.assertEqual(cm.exception.returncode, 1)

    def test_invalid_config(self):
        self.assertRaises(CommandError, lambda: self.kernel('--imax', '0'))
        self.assertRaises(CommandError, lambda: self.kernel('--normalize'))

    def test_stdout(self):
        stdout = StringIO()
        call_command('qesk_kernel', '--dataset', 'TOY', '--dataset-dir', self.tmpdir,
                     '--output', self.path('o.gram'), stdout=stdout)
        self.assertIn('24x24', stdout.getvalue())


class EvaluateCommandTests(DatasetTestBase):
    def setUp(self):
        super().setUp()
        self.bundle = toy_dataset()
        self.write_bundle(self.bundle)

    def evaluate(self, *args):
        call_command('qesk_evaluate', '--dataset', 'TOY', '--dataset-dir', self.tmpdir,
                     '--folds', '4', '--repetitions', '2', '--c-grid', '0.1,1,10', *args, verbosity=0)

    def test_ideal_gram_file(self):
        labels = np.array(self.bundle.class_labels)
        gram_path = self.path('ideal.gram')
        write_gram(GramMatrix((labels[:, None] == labels[None, :]).astype(float), 'qesk', 10), gram_path)
        out = self.path('ideal.report.json')
        self.evaluate('--gram-file', gram_path, '--output', out)
        with open(out) as f:
            report = json.load(f)
        self.assertEqual(report['mean'], 1.0)
        self.assertEqual(report['dataset'], 'TOY')
        self.assertEqual(len(report['per_fold_accuracies']), 2)

    def test_two_folds(self):
        labels = np.array(self.bundle.class_labels)
        gram_path = self.path('ideal.gram')
        write_gram(GramMatrix((labels[:, None] == labels[None, :]).astype(float), 'qesk', 10), gram_path)
        out = self.path('two.report.json')
        self.evaluate('--gram-file', gram_path, '--folds', '2', '--output', out)
        with open(out) as f:
            report = json.load(f)
        self.assertEqual(report['folds'], 2)
        self.assertEqual(report['mean'], 1.0)

    def test_gram_file_size_mismatch(self):
        gram_path = self.path('small.gram')
        write_gram(GramMatrix(np.eye(3), 'qesk', 10), gram_path)
        with self.assertRaises(CommandError) as cm:
            self.evaluate('--gram-file', gram_path, '--output', self.path('x.json'))
        self.assertIn('3 rows', str(cm.exception))

    def test_reproducible(self):
        texts = []
        for index, workers in enumerate(('1', '3')):
            out = self.path(f'run{index}.json')
            self.evaluate('--kind', 'wlsk', '--imax', '3', '--seed', '11', '--workers', workers, '--output', out)
            with open(out) as f:
                texts.append(f.read())
        self.assertEqual(texts[0], texts[1])
        report = json.loads(texts[0])
        self.assertEqual(report['seed'], 11)
        self.assertEqual(report['kernel_kind'], 'wlsk')
        self.assertGreaterEqual(report['mean'], 0.0)
        self.assertLessEqual(report['mean'], 1.0)


class InspectCommandTests(DatasetTestBase):
    def setUp(self):
        super().setUp()
        self.write_bundle(bundle_of([PATH3, SINGLE_EDGE, Graph(3)], [0, 1, 1], name='SMALL'))

    def inspect(self, index):
        stdout = StringIO()
        call_command('qesk_inspect', '--dataset', 'SMALL', '--dataset-dir', self.tmpdir, '--imax', '2',
                     '--graph-index', str(index), '--stdout', stdout=stdout, verbosity=0)
        return stdout.getvalue()

    def test_path3(self):
        text = self.inspect(0)
        q = np.array([[float(v) for v in row.split(',')] for row in section(text, 'amm')])
        np.testing.assert_allclose(q[1], [0.25, 0.5, 0.25], atol=1e-12)
        entropies = [float(v) for v in section(text, 'entropies')]
        self.assertAlmostEqual(entropies[1], 1.5 * np.log(2), places=12)
        # degree policy: endpoints share a code, the center differs
        labels = [tuple(int(v) for v in row.split(',')) for row in section(text, 'labels')]
        self.assertEqual(len(labels), 6)
        self.assertEqual(labels[0][2], labels[2][2])
        self.assertNotEqual(labels[0][2], labels[1][2])
        self.assertEqual(len(section(text, 'count_features')), 4)

    def test_edgeless_fallback(self):
        text = self.inspect(2)
        np.testing.assert_allclose([float(v) for v in section(text, 'entropies')], [0.0, 0.0, 0.0], atol=1e-12)
        weights = [float(row.split(',')[3]) for row in section(text, 'entropic_features')]
        self.assertEqual(weights, [1.0, 1.0])

    def test_out_of_range(self):
        with self.assertRaises(CommandError):
            self.inspect(3)

    def test_file_output(self):
        out = self.path('small.txt')
        call_command('qesk_inspect', '--dataset', 'SMALL', '--dataset-dir', self.tmpdir,
                     '--graph-index', '1', '--output', out, verbosity=0)
        with open(out) as f:
            self.assertTrue(f.read().startswith('# graph 1 vertices=2 edges=1 class=1'))


class StatsCommandTests(DatasetTestBase):
    def test_stats(self):
        self.write_bundle(toy_dataset())
        stdout = StringIO()
        call_command('qesk_stats', 'TOY', '--dataset-dir', self.tmpdir, stdout=stdout)
        lines = stdout.getvalue().splitlines()
        self.assertEqual(lines[0], 'dataset, graphs, classes, mean_vertices, mean_edges, vertex_labels')
        self.assertTrue(lines[1].startswith('TOY, 24, 2, 10.50,'))
        self.assertTrue(lines[1].endswith(', 2'))

    def test_missing(self):
        self.assertRaises(CommandError, lambda: call_command('qesk_stats', 'NOPE', '--dataset-dir', self.tmpdir))
