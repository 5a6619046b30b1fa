package app.report;

public class ReportView extends View {
    public void render() {
        header.setText(i18n.get("report.title"));
        exportButton.setText(i18n.get("report.export.pdf"));
        cancelButton.setText(i18n.get("common.cancel"));
    }
}
