from django.core.management.base import BaseCommand, CommandError

from qesk.graph import QeskException
from qesk.graphio import dataset_statistics, load_dataset


class Command(BaseCommand):
    help = 'Show graph count, classes, mean size and vertex labels of datasets.'

    def add_arguments(self, parser):
        parser.add_argument('datasets', nargs='+', type=str)
        parser.add_argument('--dataset-dir', dest='dataset_dir')

    def handle(self, *args, **options):
        self.stdout.write('dataset, graphs, classes, mean_vertices, mean_edges, vertex_labels')
        for name in options['datasets']:
            try:
                stats = dataset_statistics(load_dataset(name, options.get('dataset_dir')))
            except QeskException as exc:
                raise CommandError(str(exc))
            labels = '-' if stats['vertex_labels'] is None else stats['vertex_labels']
            self.stdout.write(
                f'{stats["name"]}, {stats["graphs"]}, {stats["classes"]}, '
                f'{stats["mean_vertices"]:.2f}, {stats["mean_edges"]:.2f}, {labels}')
