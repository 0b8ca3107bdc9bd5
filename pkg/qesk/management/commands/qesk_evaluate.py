from qesk.evaluation import write_report
from ._base import PipelineCommand, float_list


class Command(PipelineCommand):
    help = 'Evaluate a kernel by repeated stratified C-SVM cross-validation.'
    output_suffix = '.report.json'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--c-grid', dest='c_grid', type=float_list,
                            help='comma separated C values')
        parser.add_argument('--folds', type=int)
        parser.add_argument('--repetitions', type=int)
        parser.add_argument('--seed', type=int)
        parser.add_argument('--smo-tol', dest='smo_tol', type=float)
        parser.add_argument('--gram-file', dest='gram_file',
                            help='use a gram matrix written by qesk_kernel')

    def handle(self, *args, **options):
        self.gram_file = options.get('gram_file')
        config = self.build_config(options, **{
            name: options.get(name) for name in ('c_grid', 'folds', 'repetitions', 'seed', 'smo_tol')})
        pipeline = self.execute_pipeline(config)
        self.check_psd(pipeline)

    def run(self, pipeline):
        if self.gram_file:
            pipeline.use_gram_file(self.gram_file)
        report = pipeline.evaluate()
        path = pipeline.config['output_path']
        write_report(report, path)
        psd = pipeline.psd
        pipeline.write_manifest(f'{path}.manifest.json')
        if self.verbosity:
            self.stdout.write(
                f'{report["dataset"]} {report["kernel_kind"]}: '
                f'{100 * report["mean"]:.2f} +- {100 * report["std_error"]:.2f} % written to {path}, '
                f'min eigenvalue {psd["min_eigenvalue"]:g}')
