from qesk.kernel import write_gram
from ._base import PipelineCommand


class Command(PipelineCommand):
    help = 'Compute the Gram matrix of a dataset and write it with a run manifest.'
    output_suffix = '.gram'

    def run(self, pipeline):
        k = pipeline.gram
        psd = pipeline.psd
        path = pipeline.config['output_path']
        write_gram(k, path)
        pipeline.write_manifest(f'{path}.manifest.json')
        if self.verbosity:
            self.stdout.write(f'{k.kernel_kind} gram matrix {len(k)}x{len(k)} written to {path}, '
                              f'min eigenvalue {psd["min_eigenvalue"]:g}')

    def handle(self, *args, **options):
        pipeline = self.execute_pipeline(self.build_config(options))
        self.check_psd(pipeline)
