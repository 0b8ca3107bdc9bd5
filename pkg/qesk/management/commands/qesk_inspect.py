from ._base import PipelineCommand


class Command(PipelineCommand):
    help = 'Dump mixing matrix, entropies, WL codes and features of one graph.'
    output_suffix = '.inspect.txt'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--graph-index', dest='graph_index', type=int, required=True,
                            help='0-based graph index')
        parser.add_argument('--stdout', action='store_true', help='print instead of writing a file')

    def handle(self, *args, **options):
        self.graph_index = options['graph_index']
        self.to_stdout = options['stdout']
        self.execute_pipeline(self.build_config(options))

    def run(self, pipeline):
        text = pipeline.inspect(self.graph_index)
        if self.to_stdout:
            self.stdout.write(text, ending='')
            return
        with open(pipeline.config['output_path'], 'w', encoding='ascii') as f:
            f.write(text)
